"""
Exceptions package for the WSE security-analysis toolkit
"""

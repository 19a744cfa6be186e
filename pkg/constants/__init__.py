"""
Constants package for the WSE security-analysis toolkit
"""

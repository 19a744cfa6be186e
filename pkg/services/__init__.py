"""
Services package for the WSE security-analysis toolkit
"""

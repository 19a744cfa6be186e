"""
Protocol simulation services
"""

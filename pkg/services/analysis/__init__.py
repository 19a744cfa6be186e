"""
Security analysis services
"""

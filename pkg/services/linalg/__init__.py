"""
Linear algebra services
"""

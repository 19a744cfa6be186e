"""
Artifact export services
"""

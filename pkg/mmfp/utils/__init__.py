"""
Utils package initialization
Configuration, logging, errors and the basis cache.
"""

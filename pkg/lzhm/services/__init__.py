"""
Algorithm and harness services
"""

"""
Command groups; each module exposes register(subparsers)
"""

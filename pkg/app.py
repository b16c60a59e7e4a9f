"""
Main entry point for deltakit
Keeps `python app.py ...` working alongside the installed console script
"""

from src.app import main

if __name__ == '__main__':
    main()

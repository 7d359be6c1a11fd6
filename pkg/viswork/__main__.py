"""Allow running viswork as a module: python -m viswork"""

from .cli import main

if __name__ == '__main__':
    main()

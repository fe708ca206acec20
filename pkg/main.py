# main.py
import sys

from src.main import configure_logging, main

if __name__ == "__main__":
    configure_logging()
    try:
        sys.exit(main())
    except KeyboardInterrupt:
        sys.exit(130)

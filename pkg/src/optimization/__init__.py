# src/optimization/__init__.py

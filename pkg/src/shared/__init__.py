# src/shared/__init__.py

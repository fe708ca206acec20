# src/physics/__init__.py

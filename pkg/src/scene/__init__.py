# src/scene/__init__.py

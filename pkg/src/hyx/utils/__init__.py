"""Utility modules for hyx."""

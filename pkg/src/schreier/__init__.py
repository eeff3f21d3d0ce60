"""Schreier families, probability blocks and the norms built on them."""

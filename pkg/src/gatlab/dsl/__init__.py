"""Parsing, printing and elaboration of gatlab source files."""

"""Command-line surface: text formats and the `tik` entry point."""

"""Batch command-line interface: ``pdim-lab <command> [flags]``."""

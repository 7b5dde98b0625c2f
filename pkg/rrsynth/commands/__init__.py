"""Command handlers for the rrsynth command line, grouped by task."""

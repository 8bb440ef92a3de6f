"""Command-line front end: instance files, dispatch and reports."""

"""Shared error base.

Every error raised by this package derives from QuditGameError and carries a
machine-readable ``code`` (stable token used by the HTTP service and the CLI).
"""


class QuditGameError(Exception):
    code = "error"

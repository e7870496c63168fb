"""Exception types shared across the package.

Two failure families matter at the CLI boundary: bad user input
(ConfigError, exit code 2) and numerical breakdown such as a missing
root bracket or a non-convergent integral (NumericalFailure, exit
code 3). Library code raises plain ValueError for programming errors
on internal call sites.
"""


class ConfigError(ValueError):
    """Invalid experiment configuration or parameter combination."""


class NumericalFailure(RuntimeError):
    """A numerical procedure could not produce a trustworthy result."""

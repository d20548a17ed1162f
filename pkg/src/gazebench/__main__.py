"""Allow ``python -m gazebench``."""
from gazebench.cli import entrypoint

entrypoint()

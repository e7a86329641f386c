"""Python access to the uftlqr core."""

import json

from ._uftlqr import (
    UftlqrError,
    contour_point,
    fd_gain,
    kernel_matrix,
    series_control,
    verify,
)


def run(config, out_dir=""):
    """Run a scenario given as a dict or a path to a JSON file; returns the report."""
    if not isinstance(config, dict):
        with open(config, encoding="utf-8") as fh:
            config = json.load(fh)
    from ._uftlqr import run_json

    return json.loads(run_json(json.dumps(config), str(out_dir)))


def normalize_config(config):
    from ._uftlqr import normalize_config as _norm

    return json.loads(_norm(json.dumps(config)))


__all__ = [
    "UftlqrError",
    "contour_point",
    "fd_gain",
    "kernel_matrix",
    "normalize_config",
    "run",
    "series_control",
    "verify",
]

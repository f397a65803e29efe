"""Singular traces, Marcinkiewicz norms and spectral zeta limits."""

import json

from ._singtrace import (
    Profile,
    SingtraceError,
    dixmier,
    gamma,
    heat_limit,
    heat_trace,
    marcinkiewicz_norm,
    quasinorm,
    run,
    small_ideal_constant,
    z1_seminorm,
    zeta_limit,
    zeta_value,
    zp_seminorm,
)

__all__ = [
    "Profile",
    "SingtraceError",
    "analyze",
    "check",
    "dixmier",
    "gamma",
    "heat_limit",
    "heat_trace",
    "marcinkiewicz_norm",
    "quasinorm",
    "run",
    "small_ideal_constant",
    "z1_seminorm",
    "zeta_limit",
    "zeta_value",
    "zp_seminorm",
]


def _invoke(args, stdin=""):
    code, out, err = run([str(a) for a in args], stdin)
    if code not in (0, 3, 4):
        raise SingtraceError(err.strip() or f"exit code {code}")
    return code, json.loads(out)


def analyze(source, quantities=("norm", "z1", "dixmier"), **flags):
    """Runs `singtrace analyze` and returns the parsed report.

    Keyword flags map to command-line options, e.g. p=2 becomes --p 2.
    """
    args = ["analyze", source, "--quantities", ",".join(quantities)]
    for key, value in flags.items():
        option = "--" + key.replace("_", "-")
        if value is True:
            args.append(option)
        elif value is not False and value is not None:
            args += [option, value]
    return _invoke(args)[1]


def check(suite="all", seed=None):
    """Runs a check suite and returns the parsed report."""
    args = ["check", suite]
    if seed is not None:
        args += ["--seed", seed]
    return _invoke(args)[1]

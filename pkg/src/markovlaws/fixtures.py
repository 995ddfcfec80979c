"""Bundled demonstration chains.

``tx.txt`` is a binary chain (p = 0.6232, q = 0.6335). ``ty.txt`` is a
4-state chain over two-bit labels ordered 00, 10, 01, 11; its third column
is printed with rounded entries summing to 0.9999, so it is loaded with
:func:`~markovlaws.markov.normalize_columns`.
"""
from __future__ import annotations

from importlib import resources

from .markov import TransferMatrix, normalize_columns, read_transfer

# initial states for the demo: x0 = 0, y0 = "01" (index 2), whose left bit is 0
X0 = 0
Y0 = 2


def _text(name: str) -> str:
    return resources.files(__package__).joinpath("data", name).read_text(encoding="ascii")


def binary_demo_matrix() -> TransferMatrix:
    return read_transfer(_text("tx.txt").encode())


def hidden_demo_matrix() -> TransferMatrix:
    rows = [[float(v) for v in ln.split()] for ln in _text("ty.txt").splitlines()[1:] if ln.strip()]
    return normalize_columns(rows)


def builtin_matrix(name: str) -> TransferMatrix:
    if name == "x":
        return binary_demo_matrix()
    if name == "y":
        return hidden_demo_matrix()
    raise KeyError(name)

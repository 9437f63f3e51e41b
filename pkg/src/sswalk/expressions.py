"""Tiny arithmetic expression language for scenario configuration files.

Supports +, -, *, /, **, parentheses, numeric literals (including the
imaginary suffix j), the variables declared by the caller (x, t, x1, x2, a)
and a whitelist of functions.  Expressions are parsed once with the ast
module and evaluated on numpy arrays; nothing outside the whitelist can run.
"""

from __future__ import annotations

import ast

import numpy as np

FUNCTIONS = {
    "cos": np.cos,
    "sin": np.sin,
    "tan": np.tan,
    "acos": np.arccos,
    "asin": np.arcsin,
    "atan": np.arctan,
    "ln": np.log,
    "log": np.log,
    "exp": np.exp,
    "sqrt": np.sqrt,
    "abs": np.abs,
    "pow": np.power,
    "sec": lambda v: 1.0 / np.cos(v),
}

CONSTANTS = {"pi": np.pi, "e": np.e}

_BINOPS = {
    ast.Add: lambda a, b: a + b,
    ast.Sub: lambda a, b: a - b,
    ast.Mult: lambda a, b: a * b,
    ast.Div: lambda a, b: a / b,
    ast.Pow: lambda a, b: a**b,
}

_UNARY = {ast.UAdd: lambda a: a, ast.USub: lambda a: -a}


class ExpressionError(ValueError):
    pass


class Expression:
    """A compiled expression over a fixed set of variable names."""

    def __init__(self, source: str, variables=("x", "t", "a")):
        self.source = source
        self.variables = tuple(variables)
        try:
            tree = ast.parse(source, mode="eval")
        except SyntaxError as exc:
            raise ExpressionError(f"cannot parse {source!r}: {exc.msg}") from exc
        self._check(tree.body)
        self._tree = tree.body

    def _check(self, node):
        if isinstance(node, ast.Constant):
            if not isinstance(node.value, (int, float, complex)):
                raise ExpressionError(f"non-numeric literal in {self.source!r}")
        elif isinstance(node, ast.Name):
            if node.id not in self.variables and node.id not in CONSTANTS:
                raise ExpressionError(
                    f"unknown name {node.id!r} in {self.source!r}; "
                    f"variables here are {', '.join(self.variables)}"
                )
        elif isinstance(node, ast.BinOp):
            if type(node.op) not in _BINOPS:
                raise ExpressionError(f"operator not allowed in {self.source!r}")
            self._check(node.left)
            self._check(node.right)
        elif isinstance(node, ast.UnaryOp):
            if type(node.op) not in _UNARY:
                raise ExpressionError(f"operator not allowed in {self.source!r}")
            self._check(node.operand)
        elif isinstance(node, ast.Call):
            if not isinstance(node.func, ast.Name) or node.func.id not in FUNCTIONS:
                raise ExpressionError(f"unknown function in {self.source!r}")
            if node.keywords:
                raise ExpressionError("keyword arguments are not supported")
            for arg in node.args:
                self._check(arg)
        else:
            raise ExpressionError(
                f"unsupported syntax ({type(node).__name__}) in {self.source!r}"
            )

    def _eval(self, node, env):
        if isinstance(node, ast.Constant):
            return node.value
        if isinstance(node, ast.Name):
            return env[node.id] if node.id in env else CONSTANTS[node.id]
        if isinstance(node, ast.BinOp):
            return _BINOPS[type(node.op)](self._eval(node.left, env),
                                          self._eval(node.right, env))
        if isinstance(node, ast.UnaryOp):
            return _UNARY[type(node.op)](self._eval(node.operand, env))
        if isinstance(node, ast.Call):
            args = [self._eval(a, env) for a in node.args]
            return FUNCTIONS[node.func.id](*args)
        raise ExpressionError("unreachable")

    def __call__(self, **env):
        missing = [v for v in env if v not in self.variables]
        if missing:
            raise ExpressionError(f"unexpected variables {missing}")
        return self._eval(self._tree, env)


def compile_xt(source: str, a: float):
    """Compile an expression of x and t into a broadcasting (x, t) field."""
    expr = Expression(source, variables=("x", "t", "a"))

    def fn(x, t):
        out = expr(x=np.asarray(x, dtype=float), t=t, a=a)
        return np.broadcast_to(out, np.shape(x)).copy() if np.ndim(x) else out

    return fn


def parse_complex(source: str) -> complex:
    """Evaluate a constant expression (may use j-literals) to one number."""
    expr = Expression(source, variables=())
    value = expr()
    return complex(value)

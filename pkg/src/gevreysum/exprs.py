"""Safe complex-valued expression callables for oracles and continuations.

Supports one free variable, the imaginary unit `i`, numeric literals, the
constants pi and e, the arithmetic operators (+, -, *, /, ^ or **), and a
whitelist of cmath functions.  Used by the CLI to accept closed-form
continuations and oracle definitions without executing arbitrary code.
"""

from __future__ import annotations

import ast
import cmath
from typing import Callable

from .errors import ExpressionError

_FUNCTIONS: dict[str, Callable[[complex], complex]] = {
    "exp": cmath.exp,
    "log": cmath.log,
    "sqrt": cmath.sqrt,
    "sin": cmath.sin,
    "cos": cmath.cos,
    "tan": cmath.tan,
    "sinh": cmath.sinh,
    "cosh": cmath.cosh,
    "atan": cmath.atan,
    "abs": abs,
}

_CONSTANTS = {"i": 1j, "pi": complex(cmath.pi), "e": complex(cmath.e)}

_BINOPS = {
    ast.Add: lambda a, b: a + b,
    ast.Sub: lambda a, b: a - b,
    ast.Mult: lambda a, b: a * b,
    ast.Div: lambda a, b: a / b,
    ast.Pow: lambda a, b: a**b,
}


def compile_expression(expr: str, var: str = "u") -> Callable[[complex], complex]:
    """Compile `expr` into a function of one complex variable named `var`."""
    try:
        tree = ast.parse(expr.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise ExpressionError(f"invalid expression: {exc.msg}") from exc

    def ev(node: ast.AST, value: complex) -> complex:
        if isinstance(node, ast.Expression):
            return ev(node.body, value)
        if isinstance(node, ast.Constant):
            if isinstance(node.value, (int, float)):
                return complex(node.value)
            raise ExpressionError(f"literal {node.value!r} not allowed")
        if isinstance(node, ast.Name):
            if node.id == var:
                return value
            if node.id in _CONSTANTS:
                return _CONSTANTS[node.id]
            raise ExpressionError(f"unknown name {node.id!r}")
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left, value), ev(node.right, value))
        if isinstance(node, ast.UnaryOp):
            if isinstance(node.op, ast.USub):
                return -ev(node.operand, value)
            if isinstance(node.op, ast.UAdd):
                return ev(node.operand, value)
            raise ExpressionError("unsupported unary operator")
        if isinstance(node, ast.Call):
            if not isinstance(node.func, ast.Name) or node.func.id not in _FUNCTIONS:
                raise ExpressionError("only whitelisted functions may be called")
            if len(node.args) != 1 or node.keywords:
                raise ExpressionError("functions take exactly one positional argument")
            return complex(_FUNCTIONS[node.func.id](ev(node.args[0], value)))
        raise ExpressionError(f"unsupported syntax: {type(node).__name__}")

    # validate structure eagerly; numeric issues at the probe point are fine
    try:
        ev(tree, 1.0 + 0.5j)
    except ExpressionError:
        raise
    except Exception:
        pass

    def fn(value: complex) -> complex:
        return complex(ev(tree, complex(value)))

    return fn

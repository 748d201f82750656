"""Tiny arithmetic expression grammar, evaluated over caller-supplied values.

Accepts +, -, *, /, integer powers, parentheses, integer literals, names,
and calls like sigma(x) or sigma(x, 2) or t(-1).  The caller provides an
ops object mapping literals, names and calls into its value domain.
"""

from __future__ import annotations

import ast


class ExpressionError(ValueError):
    pass


def evaluate(text, ops):
    # caret powers get Python's exponent precedence
    source = text.replace("^", "**")
    try:
        tree = ast.parse(source, mode="eval")
    except SyntaxError as exc:
        raise ExpressionError(f"cannot parse {text!r}: {exc}") from exc
    return _ev(tree.body, ops)


def _int_literal(node):
    if isinstance(node, ast.Constant) and isinstance(node.value, int):
        return node.value
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
        return -_int_literal(node.operand)
    raise ExpressionError("expected an integer literal")


def _ev(node, ops):
    if isinstance(node, ast.Constant):
        if isinstance(node.value, int):
            return ops.from_int(node.value)
        raise ExpressionError(f"unsupported literal {node.value!r}")
    if isinstance(node, ast.BinOp):
        if isinstance(node.op, ast.Pow):
            e = _int_literal(node.right)
            if e < 0:
                raise ExpressionError("negative exponents are not supported")
            return ops.pow(_ev(node.left, ops), e)
        a = _ev(node.left, ops)
        b = _ev(node.right, ops)
        if isinstance(node.op, ast.Add):
            return ops.add(a, b)
        if isinstance(node.op, ast.Sub):
            return ops.sub(a, b)
        if isinstance(node.op, ast.Mult):
            return ops.mul(a, b)
        if isinstance(node.op, ast.Div):
            return ops.div(a, b)
        raise ExpressionError(f"unsupported operator {type(node.op).__name__}")
    if isinstance(node, ast.UnaryOp):
        if isinstance(node.op, ast.USub):
            return ops.neg(_ev(node.operand, ops))
        if isinstance(node.op, ast.UAdd):
            return _ev(node.operand, ops)
        raise ExpressionError("unsupported unary operator")
    if isinstance(node, ast.Name):
        return ops.name(node.id)
    if isinstance(node, ast.Call):
        if not isinstance(node.func, ast.Name):
            raise ExpressionError("only simple calls are supported")
        args = []
        for a in node.args:
            try:
                args.append(_int_literal(a))
            except ExpressionError:
                args.append(_ev(a, ops))
        return ops.call(node.func.id, args)
    raise ExpressionError(f"unsupported syntax {type(node).__name__}")

"""Dense linear algebra over a FieldSpec, on raw field values."""

from __future__ import annotations

from .fields import FieldSpec


def det(field: FieldSpec, rows) -> object:
    """Determinant by Gaussian elimination."""
    a = [list(r) for r in rows]
    size = len(a)
    result = field.one
    for col in range(size):
        pivot = next((r for r in range(col, size) if not field.is_zero(a[r][col])), None)
        if pivot is None:
            return field.zero
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            result = field.neg(result)
        pv = a[col][col]
        result = field.mul(result, pv)
        inv = field.inv(pv)
        for r in range(col + 1, size):
            if field.is_zero(a[r][col]):
                continue
            factor = field.mul(a[r][col], inv)
            a[r] = [field.sub(x, field.mul(factor, y)) for x, y in zip(a[r], a[col])]
    return result


def inverse(field: FieldSpec, rows):
    """Inverse by Gauss-Jordan; raises ZeroDivisionError when singular."""
    size = len(rows)
    a = [list(r) + [field.one if i == j else field.zero for j in range(size)] for i, r in enumerate(rows)]
    for col in range(size):
        pivot = next((r for r in range(col, size) if not field.is_zero(a[r][col])), None)
        if pivot is None:
            raise ZeroDivisionError("singular matrix")
        a[col], a[pivot] = a[pivot], a[col]
        inv = field.inv(a[col][col])
        a[col] = [field.mul(x, inv) for x in a[col]]
        for r in range(size):
            if r != col and not field.is_zero(a[r][col]):
                factor = a[r][col]
                a[r] = [field.sub(x, field.mul(factor, y)) for x, y in zip(a[r], a[col])]
    return [row[size:] for row in a]


def matmul(field: FieldSpec, a, b):
    inner = len(b)
    cols = len(b[0]) if b else 0
    out = []
    for row in a:
        new = []
        for j in range(cols):
            s = field.zero
            for t in range(inner):
                s = field.add(s, field.mul(row[t], b[t][j]))
            new.append(s)
        out.append(new)
    return out

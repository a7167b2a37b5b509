"""Criterion lines collected by test_acceptance and printed at session end."""

LINES = {}


def record(n, ok, detail):
    line = f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    LINES[n] = line
    print(line)
    return line

"""Shortest round-trip decimal formatting for 64-bit floats."""


def fmt_float(x: float) -> str:
    """Format x as the shortest decimal that parses back to the same bits.

    Integral values lose the trailing ".0" so golden files stay tidy
    ("0", "6.5", "1e+22").
    """
    s = repr(float(x))
    if s.endswith(".0"):
        s = s[:-2]
    if s == "-0":
        s = "0"
    return s

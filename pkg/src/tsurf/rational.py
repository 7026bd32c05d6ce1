"""Rational literals: parsing and canonical formatting.

Coordinates, radii and flag values are exact rationals throughout the
library. `fractions.Fraction` already keeps reduced form with a positive
denominator, so this module only handles the text representation used by
surface files and command-line flags: "p/q", "p", or a decimal like "2.5".
"""

from fractions import Fraction

from .errors import ParseError


def parse_rational(text) -> Fraction:
    """Parse "p/q", an integer string, a decimal string, or a number.

    Raises ParseError on anything else (including irrational spellings).
    """
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, float):
        # Floats arrive only from JSON decimals typed by a user; take the
        # exact binary value rather than guessing digits.
        return Fraction(text)
    if not isinstance(text, str):
        raise ParseError(f"not a rational literal: {text!r}")
    s = text.strip()
    try:
        if "/" in s:
            num, den = s.split("/")
            f = Fraction(int(num), int(den))
        else:
            f = Fraction(s)  # handles "3" and "2.5"
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"not a rational literal: {text!r}") from exc
    return f


def format_rational(f: Fraction) -> str:
    """Canonical text form: "p" for integers, "p/q" otherwise."""
    if f.denominator == 1:
        return str(f.numerator)
    return f"{f.numerator}/{f.denominator}"

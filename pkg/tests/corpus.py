"""Malformed presentation texts; each must be rejected with a position."""

MALFORMED = [
    "",
    "<a, b | a^2",
    "a, b | a^2>",
    "<a, b  a^2>",
    "<a, a | a>",
    "<a | b>",
    "<a | a^>",
    "<a | a^x>",
    "<a | a^-->",
    "<a | (a*a>",
    "<a | a*a)>",
    "<a | [a]>",
    "<a | [a, a>",
    "<a | a = >",
    "<a | = a>",
    "<a | a,, a>",
    "<a | a > trailing",
    "<1 | a>",
    "<a | a $ a>",
    "<a,\n b |\n a^2,\n b^^3>",
]

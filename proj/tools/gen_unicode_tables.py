#!/usr/bin/env python3
"""Regenerates src/unicode_tables.inc from the running interpreter's unicodedata."""
import sys
import unicodedata


def ranges(pred):
    out, start, prev = [], None, None
    for cp in range(0x110000):
        if pred(cp):
            if start is None:
                start = cp
            prev = cp
        elif start is not None:
            out.append((start, prev))
            start = None
    if start is not None:
        out.append((start, prev))
    return out


def is_punct(cp):
    return unicodedata.category(chr(cp)).startswith("P")


def is_space(cp):
    return chr(cp).isspace()


def lower_pairs():
    pairs = []
    for cp in range(0x110000):
        lo = chr(cp).lower()
        if len(lo) == 1 and ord(lo) != cp:
            pairs.append((cp, ord(lo)))
    return pairs


def main(path):
    with open(path, "w", encoding="ascii") as f:
        f.write("// Generated by tools/gen_unicode_tables.py (Unicode %s). Do not edit.\n"
                % unicodedata.unidata_version)
        for name, pred in (("kPunctuationRanges", is_punct), ("kSpaceRanges", is_space)):
            rs = ranges(pred)
            f.write("constexpr CodePointRange %s[] = {\n" % name)
            for a, b in rs:
                f.write("    {0x%04X, 0x%04X},\n" % (a, b))
            f.write("};\n")
        f.write("constexpr LowerMapping kLowerMappings[] = {\n")
        for a, b in lower_pairs():
            f.write("    {0x%04X, 0x%04X},\n" % (a, b))
        f.write("};\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "src/unicode_tables.inc")

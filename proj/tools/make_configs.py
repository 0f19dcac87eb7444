#!/usr/bin/env python3
"""Regenerates the example configs under configs/.

The nonabelian levels are seeded random permutation pairs. Any pair defines a
quotient of F2; for the genus-2 group the pair (x, y) is used through
a -> x, b -> y, c -> y, d -> x, which kills [a,b][c,d].
"""
import argparse
import pathlib
import random


def transitive(perms, n):
    seen = {0}
    stack = [0]
    inverses = []
    for p in perms:
        inv = [0] * n
        for i, j in enumerate(p):
            inv[j] = i
        inverses.append(inv)
    while stack:
        x = stack.pop()
        for p in perms + inverses:
            y = p[x]
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == n


def random_pair(rng, n):
    while True:
        x = list(range(n))
        y = list(range(n))
        rng.shuffle(x)
        rng.shuffle(y)
        if transitive([x, y], n):
            return x, y


def perm_level(mapping):
    body = ", ".join(f"{k} = [{', '.join(map(str, v))}]" for k, v in mapping.items())
    return f"[[chain.level]]\nquotient_perms = {{ {body} }}\n"


def write(path, text):
    path.write_text(text)
    print("wrote", path)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=pathlib.Path(__file__).resolve().parent.parent / "configs", type=pathlib.Path)
    args = ap.parse_args()
    out = args.out
    out.mkdir(parents=True, exist_ok=True)

    rng = random.Random(20240601)
    f2 = """# Ornstein-Weiss map on F2 over GF(2).
name = "f2_ow"
field = 2
dim = 1
tail = 3
reference_group = "F2"

[presentation]
generators = "ab"
relators = []

[subshift]
kind = "kernel"
matrix = [["1 - A", "1 - B"]]

[[chain.level]]
builtin = "abelianization"
modulus = 2
levels = 5

"""
    for n in (1024, 2048, 4096):
        x, y = random_pair(rng, n)
        f2 += perm_level({"a": x, "b": y}) + "\n"
    write(out / "f2_ow.toml", f2)

    g2 = """# Closed orientable surface group of genus 2 over GF(5).
name = "genus2"
field = 5
dim = 1
tail = 3
reference_group = "surface2"

[presentation]
generators = "abcd"
relators = ["abABcdCD"]

[subshift]
kind = "ker_coboundary"
dim = 2

[[chain.level]]
builtin = "abelianization"
modulus = 2
levels = 2

"""
    for n in (300, 600, 1000):
        x, y = random_pair(rng, n)
        g2 += perm_level({"a": x, "b": y, "c": y, "d": x}) + "\n"
    write(out / "genus2.toml", g2)


if __name__ == "__main__":
    main()

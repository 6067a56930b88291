"""Random formulas with value-group quantifiers over cross terms."""
import random

NS = (2, 3, 4, 8, 9)


def _vgterm(rng, y, frees):
    a = rng.choice([1, 1, 1, 2, 3, -1, -2])
    parts = [f"{a}*{y}"]
    for z in frees:
        if rng.random() < 0.4:
            parts.append(f"{rng.choice([1, -1, 2])}*{z}")
    c = rng.randint(-2, 3)
    if c:
        parts.append(str(c))
    return " + ".join(parts)


def _atom(rng, y, frees, xis):
    k = rng.random()
    if k < 0.45:
        n = rng.choice(NS)
        t = _vgterm(rng, y, frees)
        rhs = rng.choice([x for x, m in xis if m == n] + ["0", "1"])
        return f"cross[{n}]({t}) = {rhs}"
    if k < 0.75:
        op = rng.choice(["<", "<=", "="])
        return f"{_vgterm(rng, y, frees)} {op} {rng.choice(frees + ['0', '2'])}"
    if k < 0.85:
        d = rng.choice([2, 3])
        return f"{_vgterm(rng, y, frees)} ≡{{{d}}} {rng.randint(0, d - 1)}"
    n = rng.choice(NS)
    return f"A[{n}](cross[{n}]({_vgterm(rng, y, frees)}) + 1)"


def random_formula(rng: random.Random) -> str:
    frees = ["z"] if rng.random() < 0.7 else []
    n = rng.choice(NS)
    xis = [("xi", n)]
    k = rng.randint(1, 3)
    lits = []
    for _ in range(k):
        a = _atom(rng, "y", frees, xis)
        lits.append(f"~({a})" if rng.random() < 0.25 else a)
    body = " /\\ ".join(lits)
    if rng.random() < 0.2:
        body = f"({body}) \\/ ({_atom(rng, 'y', frees, xis)})"
    decl = ", ".join([f"xi:rf[{n}]"] + [f"{z}:vg" for z in frees])
    q = "EX" if rng.random() < 0.8 else "ALL"
    return f"VARS {decl}. {q} y:vg. {body}"


def corpus(seed: int = 7, size: int = 30) -> list:
    rng = random.Random(seed)
    return [random_formula(rng) for _ in range(size)]

"""Generate the Presburger QE corpus and freeze z3 oracle answers.

Each formula has at most two quantifiers, coefficients in [-5, 5] and at
most three free variables.  The oracle applies z3's qe2 tactic (falling back
to qe_rec) to the formula with ord constants replaced by their values at p,
then evaluates the quantifier-free result on [-30, 30]^k.
"""
import base64, json, random, sys, time, zlib
from pathlib import Path

import numpy as np
import z3

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))
sys.path.insert(0, str(ROOT / "tests"))

from gdpkit.formula import Cmp, Cong, Exists, Forall, conj, disj, neg, vg_var  # noqa: E402
from gdpkit.formula.serialize import formula_to_json  # noqa: E402
from gdpkit.formula.terms import VGTerm  # noqa: E402
from z3_oracle import np_eval, to_z3  # noqa: E402

R = 30
PRIMES = (2, 3, 5)


def make_corpus(seed=20240917, count=100):
    rng = random.Random(seed)

    def rterm(vs):
        d = {v: rng.randint(-5, 5) for v in rng.sample(vs, rng.randint(1, min(2, len(vs))))}
        t = VGTerm.make(d, rng.randint(-5, 5))
        if rng.random() < 0.2:
            t = t + VGTerm.ord(rng.choice([2, 3, 4, 6]))
        return t

    def ratom(vs):
        r = rng.random()
        a, b = rterm(vs), rterm(vs)
        if r < 0.4:
            return Cmp("<", a, b)
        if r < 0.7:
            return Cmp("<=", a, b)
        if r < 0.8:
            return Cmp("=", a, b)
        return Cong(rng.randint(2, 5), a, b)

    def rform(vs, depth=2):
        if depth == 0 or rng.random() < 0.3:
            a = ratom(vs)
            return neg(a) if rng.random() < 0.2 else a
        parts = [rform(vs, depth - 1) for _ in range(2)]
        return conj(*parts) if rng.random() < 0.65 else disj(*parts)

    out = []
    while len(out) < count:
        nf = rng.randint(1, 3)
        fv = [vg_var(f"z{j}") for j in range(nf)]
        qv = [vg_var(f"y{j}") for j in range(rng.randint(1, 2))]
        f = rform(fv + qv)
        for q in qv:
            f = (Exists if rng.random() < 0.7 else Forall)(q, f)
        out.append((f, [v.name for v in fv]))
    return out


def oracle(f, names, p, timeout_ms=20000):
    ordv = lambda q: 1 if q == p else 0
    for tac in ("qe2", "qe_rec"):
        g = z3.Goal()
        g.add(to_z3(f, ordv))
        try:
            res = z3.TryFor(z3.Then(z3.Tactic(tac), z3.Tactic("simplify")), timeout_ms)(g)
        except z3.Z3Exception:
            continue
        e = z3.Or(*[x.as_expr() for x in res]) if len(res) else z3.BoolVal(False)
        grids = np.meshgrid(*[np.arange(-R, R + 1, dtype=np.int64) for _ in names], indexing="ij")
        shape = grids[0].shape
        return np.asarray(np_eval(e, dict(zip(names, grids)), shape), dtype=bool), tac
    return None, None


def main():
    corpus = make_corpus()
    records = []
    t0 = time.time()
    for i, (f, names) in enumerate(corpus):
        rec = {"formula": formula_to_json(f), "vars": names, "masks": {}, "tactic": {}}
        for p in PRIMES:
            mask, tac = oracle(f, names, p)
            if mask is None:
                raise SystemExit(f"z3 could not decide corpus formula {i}: {f}")
            rec["masks"][str(p)] = base64.b64encode(zlib.compress(np.packbits(mask.ravel()).tobytes(), 9)).decode()
            rec["tactic"][str(p)] = tac
        records.append(rec)
        print(i, f"{time.time() - t0:.1f}s", rec["tactic"], flush=True)
    data = {"radius": R, "primes": list(PRIMES), "formulas": records}
    (ROOT / "tests" / "data" / "qe_corpus.json").write_text(json.dumps(data, sort_keys=True))


if __name__ == "__main__":
    main()

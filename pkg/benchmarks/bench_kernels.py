"""Compare the compiled and pure-Python sparse kernels.

Times the two hot paths on the d-shell Fock space: operator products in
building all 100 double tensors, and a slice of the closed-form versus
oracle sweep. Results are checked to be identical across backends.

    python3 benchmarks/bench_kernels.py [--rows N]
"""
import argparse
import time

from racahlie import comalg, kernels
from racahlie.fock import FockSpace
from racahlie.tensor import TensorBasis, labels_for


def build_all():
    space = FockSpace()
    basis = TensorBasis(space=space)
    ops = [basis.operator(lab) for lab in basis.labels]
    return basis, ops


def sweep(basis, rows):
    labels = labels_for()
    out = []
    for a in labels[:rows]:
        for b in labels:
            out.append(comalg.fock_commutator(a, b, basis))
    return out


def run(backend, rows):
    with kernels.using(backend):
        t0 = time.perf_counter()
        basis, ops = build_all()
        t1 = time.perf_counter()
        res = sweep(basis, rows)
        t2 = time.perf_counter()
    return {"build": t1 - t0, "sweep": t2 - t1, "ops": ops, "res": res}


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--rows", type=int, default=3, help="rows of the 100x100 sweep to time")
    args = p.parse_args()

    results = {b: run(b, args.rows) for b in kernels.available()}
    print(f"{'backend':10s} {'build 100 tensors':>18s} {'sweep ' + str(args.rows * 100) + ' pairs':>18s}")
    for b, r in results.items():
        print(f"{b:10s} {r['build']:17.3f}s {r['sweep']:17.3f}s")
    if len(results) == 2:
        c, py = results["compiled"], results["python"]
        assert all(x == y for x, y in zip(c["ops"], py["ops"])), "operators differ between backends"
        assert c["res"] == py["res"], "commutators differ between backends"
        print(f"speedup: build x{py['build'] / c['build']:.1f}, sweep x{py['sweep'] / c['sweep']:.1f}; outputs identical")
    else:
        print("compiled extension not built; only the Python backend was timed")


if __name__ == "__main__":
    main()

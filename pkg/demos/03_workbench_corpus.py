"""Run every bundled instance through the workbench pipelines.

Equivalent to calling ``nauslander report <instance>`` for each file, but
it stays in one process so the timings are comparable.
"""
import time

from nauslander.workbench import Options, bundled_instances, parse_instance, render_text, run

for name in bundled_instances():
    inst = parse_instance(name)
    t0 = time.perf_counter()
    code, report = run("report", inst, Options(cache=False))
    print(render_text(report), end="")
    print(f"  exit code {code}, {time.perf_counter() - t0:.2f} s\n")

# a failing case: the whole module category of A2 is not 2-abelian
code, report = run("check-axioms", "a2.json", Options(n=2, subcategory="all", cache=False))
print(render_text(report), end="")
print(f"  exit code {code}")

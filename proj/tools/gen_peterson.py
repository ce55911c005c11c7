#!/usr/bin/env python3
"""Generates the trace files of the two Peterson-style suites.

Two processes run the loop a1 (non-critical), a2 (flag_i := true),
a3 (await flag_{1-i} = false), cs (critical), a4 (flag_i := false).
A state records both program counters, the flags, which process moved
last (sched_i) and whether it is the initial state. Runs are closed into
lassos at the first repeated state.

Usage: gen_peterson.py <suites-dir>
"""

import random
import sys
from pathlib import Path

PCS = ["a1", "a2", "a3", "cs", "a4"]
AP = [f"{pc}_{i}" for i in (0, 1) for pc in PCS] + ["flag_0", "flag_1", "sched_0", "sched_1", "init"]


def initial():
    return (("a1", "a1"), (False, False), None, True)


def step(state, who, awaits=True):
    """Moves process `who` (None: nobody moves). A blocked process stays put."""
    pcs, flags, _, _ = state
    if who is None:
        return (pcs, flags, None, False)
    pcs, flags = list(pcs), list(flags)
    pc = pcs[who]
    if pc == "a1":
        pcs[who] = "a2"
    elif pc == "a2":
        flags[who] = True
        pcs[who] = "a3"
    elif pc == "a3":
        if not awaits or not flags[1 - who]:
            pcs[who] = "cs"
    elif pc == "cs":
        pcs[who] = "a4"
    else:
        flags[who] = False
        pcs[who] = "a1"
    return (tuple(pcs), tuple(flags), who, False)


def bits(state):
    pcs, flags, moved, init = state
    out = []
    for i in (0, 1):
        out += [pcs[i] == pc for pc in PCS]
    out += [flags[0], flags[1], moved == 0, moved == 1, init]
    return ",".join("1" if b else "0" for b in out)


def run(schedule, awaits=True, loop_schedule=None):
    """Follows `schedule`, then repeats `loop_schedule` until a state repeats."""
    states = [initial()]
    for who in schedule:
        states.append(step(states[-1], who, awaits))
    cycle = loop_schedule if loop_schedule is not None else [None]
    k = 0
    while True:
        nxt = step(states[-1], cycle[k % len(cycle)], awaits)
        k += 1
        if nxt in states and (k % len(cycle)) == 0:
            start = states.index(nxt)
            return states, start
        states.append(nxt)
        if len(states) > 200:
            raise RuntimeError("no lasso found")


def random_run(rng, awaits, lo, hi):
    """Random schedule closed at the first repeated state, within [lo, hi] states."""
    while True:
        states = [initial()]
        while True:
            nxt = step(states[-1], rng.randint(0, 1), awaits)
            if nxt in states:
                start = states.index(nxt)
                break
            states.append(nxt)
        if lo <= len(states) <= hi:
            return states, start


def fmt(lasso):
    states, start = lasso
    assert len(states) <= 32
    return ";".join(bits(s) for s in states) + f"::{start}"


def collides(lasso):
    return any(s[0] == ("cs", "cs") for s in lasso[0])


def mutex(rng):
    pos, neg = [], []
    seen = set()
    while len(pos) < 6:
        lasso = random_run(rng, True, 8, 32)
        text = fmt(lasso)
        if text not in seen:
            seen.add(text)
            pos.append(text)
    while len(neg) < 4:
        lasso = random_run(rng, False, 6, 32)
        text = fmt(lasso)
        if collides(lasso) and text not in seen:
            seen.add(text)
            neg.append(text)
    return pos, neg


def deadlock():
    full = [0, 0, 0, 0, 0, 1, 1, 1, 1, 1]
    pos = [
        # both processes take turns forever
        fmt(run([], True, full)),
        # process 0 stays in its non-critical section while process 1 cycles
        fmt(run([], True, [1, 1, 1, 1, 1])),
        # process 0 idles after a1 while process 1 cycles
        fmt(run([0], True, [1, 1, 1, 1, 1])),
        # process 0 reaches its critical section and the system then stutters
        fmt(run([0, 0, 0], True, [None])),
        # interleaved progress of both
        fmt(run([0, 1, 0, 0, 0, 0], True, [1, 1, 1, 1, 1, 0, 0, 0, 0, 0])),
    ]
    neg = [
        # both flags set, both wait at a3 forever
        fmt(run([0, 1, 0, 1], True, [0, 1])),
        # process 1 halts at a4 with its flag still set, so process 0 waits at a3 forever
        fmt(run([1, 1, 1, 1, 0, 0], True, [0])),
    ]
    return pos, neg


def write(path, pos, neg, header):
    body = [f"# {header}", "# generated by tools/gen_peterson.py", *pos, "---", *neg, "---", ",".join(AP)]
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(body) + "\n")


def main():
    root = Path(sys.argv[1] if len(sys.argv) > 1 else "suites")
    pos, neg = mutex(random.Random(2024))
    write(root / "peterson-mutex" / "traces.txt", pos, neg,
          "positives: runs of the flag algorithm; negatives: runs of a variant that skips the await")
    pos, neg = deadlock()
    write(root / "peterson-deadlockfree" / "traces.txt", pos, neg,
          "positives: runs where process 0 is never stuck waiting; negatives: process 0 waits at a3_0 forever")


if __name__ == "__main__":
    main()

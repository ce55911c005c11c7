#!/usr/bin/env python3
"""Generates the trace file of the voting-machine suite.

The machine moves through enterPwd, selectCandidate, castVote, confirmVote
and done. A session starts when a voter enters the booth and types the
password; back returns to selectCandidate. Officials may enter the booth to
set up the machine while it waits for a password. The fraud scenario has the
voter leave before confirming, after which an official enters, goes back,
picks another candidate and confirms.

Usage: gen_voting.py <suites-dir>
"""

import sys
from pathlib import Path

MACHINE = ["enterPwd", "selectCandidate", "castVote", "confirmVote", "done"]
AP = MACHINE + ["voterInBooth", "officialInBooth", "backPressed", "pwdOk", "boothEmpty"]


class Run:
    def __init__(self):
        self.m, self.voter, self.official, self.back, self.pwd = "enterPwd", False, False, False, False
        self.states = []
        self.snap()

    def snap(self):
        self.states.append((self.m, self.voter, self.official, self.back, self.pwd))
        self.back = False

    def do(self, *events):
        for e in events:
            if e == "voter-in":
                self.voter = True
            elif e == "voter-out":
                self.voter = False
            elif e == "official-in":
                self.official = True
            elif e == "official-out":
                self.official = False
            elif e == "password":
                assert self.m == "enterPwd"
                self.m, self.pwd = "selectCandidate", True
            elif e == "select":
                assert self.m == "selectCandidate"
                self.m = "castVote"
            elif e == "vote":
                assert self.m == "castVote"
                self.m = "confirmVote"
            elif e == "confirm":
                assert self.m == "confirmVote"
                self.m = "done"
            elif e == "back":
                assert self.m in ("castVote", "confirmVote")
                self.m, self.back = "selectCandidate", True
            elif e == "reset":
                assert self.m == "done"
                self.m, self.pwd = "enterPwd", False
            elif e == "wait":
                pass
            else:
                raise ValueError(e)
            self.snap()
        return self

    def lasso(self):
        """Closes the run: the last state must repeat an earlier one."""
        last = self.states[-1]
        start = self.states.index(last)
        assert start < len(self.states) - 1, "run does not return to an earlier state"
        body = self.states[:-1]
        assert len(body) <= 32
        return body, start


def bits(s):
    m, voter, official, back, pwd = s
    row = [m == x for x in MACHINE] + [voter, official, back, pwd, not voter and not official]
    return ",".join("1" if b else "0" for b in row)


def fmt(run):
    body, start = run.lasso()
    return ";".join(bits(s) for s in body) + f"::{start}"


VOTE = ["voter-in", "password", "select", "vote", "confirm", "voter-out", "reset"]


def positives():
    return [
        Run().do(*VOTE),
        Run().do("official-in", "official-out", *VOTE),
        Run().do("voter-in", "password", "select", "back", "select", "vote", "confirm", "voter-out", "reset"),
        Run().do("voter-in", "password", "select", "vote", "back", "select", "vote", "confirm", "voter-out", "reset"),
        Run().do("wait", "official-in", "wait", "official-out", "voter-in", "password", "select", "vote", "confirm",
                 "voter-out", "reset"),
        Run().do(*VOTE[:-2], "wait", "voter-out", "reset", "official-in", "official-out"),
    ]


def negatives():
    return [
        # the voter leaves before confirming, an official flips the vote
        Run().do("voter-in", "password", "select", "vote", "voter-out", "official-in", "back", "select", "vote",
                 "confirm", "official-out", "reset"),
        # the voter leaves before voting, an official picks another candidate
        Run().do("voter-in", "password", "select", "voter-out", "official-in", "back", "select", "vote", "confirm",
                 "official-out", "reset"),
        # an official goes back twice before confirming
        Run().do("official-in", "official-out", "voter-in", "password", "select", "vote", "voter-out", "official-in",
                 "back", "select", "back", "select", "vote", "confirm", "official-out", "reset"),
    ]


def main():
    root = Path(sys.argv[1] if len(sys.argv) > 1 else "suites")
    lines = ["# positives: regular voting sessions; negatives: an official changes the vote of a voter who left early",
             "# generated by tools/gen_voting.py"]
    lines += [fmt(r) for r in positives()] + ["---"] + [fmt(r) for r in negatives()] + ["---", ",".join(AP)]
    (root / "voting").mkdir(parents=True, exist_ok=True)
    (root / "voting" / "traces.txt").write_text("\n".join(lines) + "\n")


if __name__ == "__main__":
    main()

"""A minimal counting register machine.

Programs are text files with one instruction per line:

    inc <reg>          increment register <reg>
    djz <reg> <label>  if <reg> is zero jump to <label>, else decrement it
    halt               stop

A line of the form '<name>:' defines a label (it may also prefix an
instruction on the same line). '#' starts a comment. Registers hold
unbounded non-negative integers and default to zero; input is placed in
register x, output is read from register y. Falling off the end of the
program halts. Every executed instruction, including halt, costs one step.

Programs are trusted to halt on every input.
"""

from __future__ import annotations

import re
from typing import Optional


class ProgramError(ValueError):
    """Malformed program text; carries the 1-based source line."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class StepLimitExceeded(Exception):
    """Internal signal used by budgeted runs."""


_NAME = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


class Program:
    def __init__(self, instructions, labels, source: str = "<memory>"):
        self.instructions = instructions
        self.labels = labels
        self.source = source

    def run(self, n: int, counter=None, step_budget: Optional[int] = None) -> int:
        """Execute on input n, return the final value of register y.

        counter, when given, is charged one unit per executed instruction.
        step_budget, when given, bounds counter's total count; crossing it
        raises StepLimitExceeded mid-run.
        """
        if n < 0:
            raise ValueError("input must be non-negative")
        regs = {"x": n}
        pc = 0
        code = self.instructions
        while pc < len(code):
            if counter is not None:
                counter.count += 1
                if step_budget is not None and counter.count >= step_budget:
                    raise StepLimitExceeded
            op, arg, target = code[pc]
            if op == "inc":
                regs[arg] = regs.get(arg, 0) + 1
                pc += 1
            elif op == "djz":
                v = regs.get(arg, 0)
                if v == 0:
                    pc = target
                else:
                    regs[arg] = v - 1
                    pc += 1
            else:
                break
        return regs.get("y", 0)


def parse_program(text: str, source: str = "<memory>") -> Program:
    instructions = []
    labels = {}
    pending = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        while line:
            head, colon, rest = line.partition(":")
            if colon and _NAME.match(head.strip()):
                name = head.strip()
                if name in labels or name in (p[0] for p in pending):
                    raise ProgramError(f"duplicate label {name!r}", lineno)
                pending.append((name, lineno))
                line = rest.strip()
                continue
            break
        if not line:
            continue
        for name, _ in pending:
            labels[name] = len(instructions)
        pending = []
        parts = line.split()
        op = parts[0]
        if op == "inc" and len(parts) == 2 and _NAME.match(parts[1]):
            instructions.append(["inc", parts[1], None])
        elif op == "djz" and len(parts) == 3 and _NAME.match(parts[1]):
            instructions.append(["djz", parts[1], parts[2], lineno])
        elif op == "halt" and len(parts) == 1:
            instructions.append(["halt", None, None])
        else:
            raise ProgramError(f"bad instruction {line!r}", lineno)
    for name, _ in pending:
        labels[name] = len(instructions)
    resolved = []
    for ins in instructions:
        if ins[0] == "djz":
            op, reg, label, lineno = ins
            if label not in labels:
                raise ProgramError(f"undefined label {label!r}", lineno)
            resolved.append(("djz", reg, labels[label]))
        else:
            resolved.append(tuple(ins[:3]))
    return Program(resolved, labels, source)


def load_program(path: str) -> Program:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_program(fh.read(), source=path)

"""Exception types shared across the workbench."""


class WorkbenchError(Exception):
    pass


class DiagramError(WorkbenchError):
    pass


class CycleError(DiagramError):
    def __init__(self, cycle):
        self.cycle = list(cycle)
        super().__init__("cycle: " + " -> ".join(self.cycle))


class HardContradiction(DiagramError):
    def __init__(self, source, target):
        self.pair = (source, target)
        super().__init__(f"both {source} -> {target} and {source} !> {target}")


class DanglingNode(DiagramError):
    def __init__(self, name):
        self.name = name
        super().__init__(f"arrow endpoint {name!r} is not a declared node")


class DuplicateItem(DiagramError):
    pass


class UnknownNode(WorkbenchError, KeyError):
    def __init__(self, name):
        self.name = name
        super().__init__(f"unknown node {name!r}")

    def __str__(self):
        return self.args[0]


class ModeError(WorkbenchError):
    pass


class NoValidPath(WorkbenchError):
    pass


class UndrivenPoint(WorkbenchError):
    pass


class DomainClosureError(WorkbenchError):
    def __init__(self, needed, reason=""):
        self.needed = needed
        self.reason = reason
        msg = f"domain lacks {sorted(needed) if needed is not None else '?'}"
        super().__init__(msg + (f" ({reason})" if reason else ""))


class BoundExceeded(WorkbenchError):
    pass


class PreconditionFailed(WorkbenchError):
    def __init__(self, prop, witness=None):
        self.prop = prop
        self.witness = witness
        super().__init__(f"precondition {prop} fails" + (f" at {witness}" if witness is not None else ""))


class CycleInQualityRelation(WorkbenchError):
    def __init__(self, cycle):
        self.cycle = cycle
        super().__init__(f"quality relation has a strict cycle through {cycle}")


class LevelOverflow(WorkbenchError):
    pass


class ParseError(WorkbenchError):
    def __init__(self, message, line=0, column=0):
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")

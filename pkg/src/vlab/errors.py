"""Exception hierarchy shared by every module."""


class VlabError(Exception):
    """Base class for all errors raised by vlab."""


class BudgetError(VlabError):
    """A configured cap (stage, level, depth, element count) was exceeded."""

    def __init__(self, cap, limit, requested=None):
        self.cap = cap
        self.limit = limit
        self.requested = requested
        msg = f"{cap} budget exceeded (limit {limit}"
        if requested is not None:
            msg += f", requested {requested}"
        super().__init__(msg + ")")


class ParseError(VlabError):
    def __init__(self, message, line=None, source=None):
        self.line = line
        self.source = source
        where = ""
        if source is not None:
            where += f"{source}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)


class MalformedFormulaError(VlabError):
    pass


class DecodeError(VlabError):
    pass


class InterpretationError(VlabError):
    pass


class ClassificationError(VlabError):
    pass


class ArityError(VlabError):
    pass


class ValidationError(VlabError):
    def __init__(self, report):
        self.report = report
        super().__init__(f"invalid coding pair: {report}")

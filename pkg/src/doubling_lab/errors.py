"""Exception hierarchy shared by every module of the package."""


class DoublingLabError(Exception):
    pass


class ArithmeticOverflow(DoublingLabError, OverflowError):
    """An exact intermediate left the admissible magnitude range."""


class InvalidArgument(DoublingLabError, ValueError):
    pass


class MalformedGraph(InvalidArgument):
    pass


class TooLarge(InvalidArgument):
    """An enumeration or allocation guard was exceeded."""


class TooSmall(InvalidArgument):
    pass


class PreconditionError(InvalidArgument):
    pass


class GraphNotDenseEnough(InvalidArgument):
    pass


class RefinementFailed(DoublingLabError, RuntimeError):
    pass


class CertificateError(DoublingLabError, RuntimeError):
    """A claimed inequality failed its direct recheck."""


class PipelineFailed(DoublingLabError, RuntimeError):
    def __init__(self, stage: str, message: str):
        super().__init__(f"pipeline failed at stage {stage!r}: {message}")
        self.stage = stage

class RelSeqError(Exception):
    pass


class ShapeError(RelSeqError, ValueError):
    pass


class ArgumentError(RelSeqError, ValueError):
    pass


class DivergenceError(RelSeqError):
    def __init__(self, msg, step=None, epoch=None):
        RelSeqError.__init__(self, msg)
        self.step = step
        self.epoch = epoch


class NonFiniteError(DivergenceError):
    pass


class DegenerateDataError(RelSeqError):
    pass


class ConfigurationError(RelSeqError):
    pass


class UnknownGenerator(ConfigurationError):
    pass


class MissingPrerequisite(RelSeqError):
    pass


class ContainerError(RelSeqError):
    pass


class FaultInjected(Warning):
    "Warned when a gradient path is deliberately corrupted for testing."
    pass

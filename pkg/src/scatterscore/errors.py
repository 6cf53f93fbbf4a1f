class ScatterScoreError(Exception):
    pass


class InvalidEmbedding(ScatterScoreError):
    pass


class TupleInapplicable(ScatterScoreError):
    def __init__(self, labels, component):
        self.labels = tuple(labels)
        self.component = component
        super().__init__(
            f"tuple ({','.join(map(str, self.labels))}) is not applicable: "
            f"component {component + 1} has no embedding for rule {self.labels[component]}"
        )


class PolicyMismatch(ScatterScoreError):
    pass


class ScriptStepFailed(ScatterScoreError):
    def __init__(self, step, cause):
        self.step = step
        self.cause = cause
        super().__init__(f"script step {step} failed: {cause}")


class UnknownDuration(ScatterScoreError):
    pass


class OutOfRange(ScatterScoreError):
    pass


class UnresolvedAlias(ScatterScoreError):
    pass


class DuplicateChord(ScatterScoreError):
    pass


class InterpretError(ScatterScoreError):
    def __init__(self, index, symbol, cause):
        self.index = index
        self.symbol = symbol
        self.cause = cause
        super().__init__(f"token {index} ({symbol}): {cause}")


class TooManyTracks(ScatterScoreError):
    pass


class ParseError(ScatterScoreError):
    """Raised by the DSL parser; carries every diagnostic it collected."""

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        first = self.diagnostics[0] if self.diagnostics else None
        msg = f"{first.span}: {first.message}" if first else "parse error"
        if len(self.diagnostics) > 1:
            msg += f" (+{len(self.diagnostics) - 1} more)"
        super().__init__(msg)

"""Exception hierarchy.

Every error carries a module-qualified ``code`` (e.g. ``"minkowski.CommonRay"``)
which the command line reports verbatim, and an exit ``status`` class:
validation failures map to exit code 1, numeric failures to exit code 2.
"""


class DecoError(Exception):
    code = "decoteich.Error"
    status = 1


class ValidationError(DecoError):
    status = 1


class NumericError(DecoError):
    status = 2


# minkowski
class CommonRayError(NumericError, ValueError):
    code = "minkowski.CommonRay"


class SameCenterError(ValidationError, ValueError):
    code = "minkowski.SameCenter"


# realization
class DegenerateRaysError(NumericError, ValueError):
    code = "realization.DegenerateRays"


class DegenerateWitnessError(NumericError, ValueError):
    code = "realization.DegenerateWitness"


# farey
class NotUnimodularError(ValidationError, ValueError):
    code = "farey.NotUnimodular"


class DepthLimitError(ValidationError, ValueError):
    code = "farey.DepthLimit"


# universal_embed
class NumericBlowupError(NumericError, OverflowError):
    code = "universal_embed.NumericBlowup"


class NotPinchedError(ValidationError, ValueError):
    code = "universal_embed.NotPinched"


class OneSidedMismatchError(NumericError, ValueError):
    code = "universal_embed.OneSidedMismatch"


# surface
class NotClosedError(ValidationError, ValueError):
    code = "surface.NotClosed"


class NotOrientableError(ValidationError, ValueError):
    code = "surface.NotOrientable"


class BadEulerError(ValidationError, ValueError):
    code = "surface.BadEuler"


class NotHyperbolicError(ValidationError, ValueError):
    code = "surface.NotHyperbolic"


class OpenPathError(ValidationError, ValueError):
    code = "surface.OpenPath"


class SelfFoldedError(ValidationError, ValueError):
    code = "surface.SelfFolded"


# solenoid_approx
class LevelTooLargeError(ValidationError, ValueError):
    code = "solenoid_approx.LevelTooLarge"


class BadNormalFormError(ValidationError, ValueError):
    code = "solenoid_approx.BadNormalForm"


class OrbitConflictError(ValidationError, ValueError):
    code = "solenoid_approx.OrbitConflict"

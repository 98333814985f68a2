"""Subcommand and flag parsing for the command line."""

from collections.abc import Callable
from dataclasses import dataclass, field

COLOR_MODES = ("auto", "always", "never")
STRATEGIES = ("prefix", "per-mode")
METHOD_NAMES = ("dwt", "eemd", "vmd")

DENOISE_FLAGS = {"--modes", "--alpha", "--tau", "--sampen-m", "--sampen-r", "--threshold", "--strategy"}
COMMON_FLAGS = {"--settings", "--color", "--debug"}

COMMAND_FLAGS: dict[str, set[str]] = {
    "ricker": {"--out", "--fc", "--dt", "--samples"},
    "section": {"--out", "--fc", "--dt", "--samples"},
    "forward": {"--out", "--config", "--jobs"},
    "addnoise": {"--in", "--out", "--snr-db", "--seed", "--dt"},
    "decompose": {"--in", "--out", "--trace", "--modes", "--alpha", "--tau", "--dt"},
    "denoise": {"--in", "--out", "--clean", "--report", "--jobs", "--dt"} | DENOISE_FLAGS,
    "snr": {"--in", "--clean", "--dt"},
    "compare": {"--in", "--clean", "--out", "--methods", "--seed", "--jobs", "--dt"} | DENOISE_FLAGS,
    "render": {"--in", "--out", "--clip", "--dt"},
    "setup": {"--jobs"} | DENOISE_FLAGS,
}


class UsageError(Exception):
    """Error in command-line usage."""

    pass


@dataclass
class ParsedCommand:
    """Subcommand with its options; options not given stay None."""

    command: str
    input: str | None = None
    output: str | None = None
    clean: str | None = None
    report: str | None = None
    config_file: str | None = None
    settings_file: str | None = None
    fc: float | None = None
    dt: float | None = None
    samples: int | None = None
    snr_db: float | None = None
    seed: int | None = None
    trace: int | None = None
    modes: int | None = None
    alpha: float | None = None
    tau: float | None = None
    sampen_m: int | None = None
    sampen_r: float | None = None
    threshold: float | None = None
    strategy: str | None = None
    clip: float | None = None
    jobs: int | None = None
    methods: list[str] = field(default_factory=lambda: list(METHOD_NAMES))
    color: str = "auto"
    debug: bool = False

    def require(self, *names: str) -> None:
        """Raise UsageError naming the first missing required option."""
        for name in names:
            if getattr(self, name) is None:
                flag = FLAG_BY_ATTRIBUTE.get(name, name)
                raise UsageError(f"{self.command} requires {flag}")


def _number(kind: Callable, description: str) -> Callable[[str, str], object]:
    def convert(arg: str, value: str) -> object:
        try:
            return kind(value)
        except ValueError:
            raise UsageError(f"{arg} requires {description}") from None
    return convert


def _choice(choices: tuple[str, ...]) -> Callable[[str, str], str]:
    def convert(arg: str, value: str) -> str:
        if value not in choices:
            raise UsageError(f"{arg} must be one of: {', '.join(choices)}")
        return value
    return convert


def _methods(arg: str, value: str) -> list[str]:
    methods = [m.strip() for m in value.split(",") if m.strip()]
    invalid = set(methods) - set(METHOD_NAMES)
    if invalid:
        raise UsageError(
            f"invalid method(s): {', '.join(sorted(invalid))} (choose from {', '.join(METHOD_NAMES)})"
        )
    return methods


def _path(arg: str, value: str) -> str:
    return value


_FLOAT = _number(float, "a number")
_INT = _number(int, "an integer")

# flag -> (attribute, converter, argument kind for error messages)
VALUE_FLAGS: dict[str, tuple[str, Callable, str]] = {
    "--in": ("input", _path, "a file path"),
    "--out": ("output", _path, "a file path"),
    "--clean": ("clean", _path, "a file path"),
    "--report": ("report", _path, "a file path"),
    "--config": ("config_file", _path, "a file path"),
    "--settings": ("settings_file", _path, "a file path"),
    "--fc": ("fc", _FLOAT, "a number"),
    "--dt": ("dt", _FLOAT, "a number"),
    "--samples": ("samples", _INT, "a number"),
    "--snr-db": ("snr_db", _FLOAT, "a number"),
    "--seed": ("seed", _INT, "a number"),
    "--trace": ("trace", _INT, "a number"),
    "--modes": ("modes", _INT, "a number"),
    "--alpha": ("alpha", _FLOAT, "a number"),
    "--tau": ("tau", _FLOAT, "a number"),
    "--sampen-m": ("sampen_m", _INT, "a number"),
    "--sampen-r": ("sampen_r", _FLOAT, "a number"),
    "--threshold": ("threshold", _FLOAT, "a number"),
    "--strategy": ("strategy", _choice(STRATEGIES), "a strategy"),
    "--clip": ("clip", _FLOAT, "a number"),
    "--jobs": ("jobs", _INT, "a number"),
    "--methods": ("methods", _methods, "a method list"),
    "--color": ("color", _choice(COLOR_MODES), "an"),
}

FLAG_BY_ATTRIBUTE = {attribute: flag for flag, (attribute, _, _) in VALUE_FLAGS.items()}


def parse_command(args: list[str]) -> ParsedCommand:
    """Parse a subcommand and its flags.

    Args:
        args: Raw command-line arguments (sys.argv[1:])

    Returns:
        ParsedCommand with the given options set

    Raises:
        UsageError: On an unknown command, a flag the command does not take,
            a missing flag argument or a malformed value
    """
    if not args:
        raise UsageError("missing command")
    command = args[0]
    if command not in COMMAND_FLAGS:
        raise UsageError(f"Unknown command: {command}")
    allowed = COMMAND_FLAGS[command] | COMMON_FLAGS
    result = ParsedCommand(command)

    i = 1
    while i < len(args):
        arg = args[i]

        if arg in ("-h", "--help"):
            raise UsageError("HELP")

        elif arg in ("-V", "--version"):
            raise UsageError("VERSION")

        elif arg not in VALUE_FLAGS and arg != "--debug":
            if arg.startswith("-"):
                raise UsageError(f"Unknown option: {arg}")
            raise UsageError(f"Unknown argument: {arg}")

        elif arg not in allowed:
            raise UsageError(f"{arg} is not an option of {command}")

        elif arg == "--debug":
            result.debug = True

        else:
            attribute, convert, kind = VALUE_FLAGS[arg]
            i += 1
            if i >= len(args):
                raise UsageError(f"{arg} requires {kind} argument")
            setattr(result, attribute, convert(arg, args[i]))

        i += 1

    return result

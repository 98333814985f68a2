"""Command-line interface for gpr-denoise."""

import csv
import logging
import sys
from dataclasses import replace
from importlib.metadata import version

from . import gprio
from .comparison import MethodConfigs, compare_methods, write_table
from .config import CONFIG_FILENAME, Settings, load_settings, write_settings
from .denoise import DenoiseReport, denoise_radargram
from .errors import DataError, NumericalError
from .evaluation import add_noise, snr
from .fdtd import build_paper_model, fdtd_forward, load_model
from .output import ColorFormatter, SummaryPrinter
from .parser import ParsedCommand, UsageError, parse_command
from .signal import Radargram
from .synth import DEFAULT_RICKER_DT, DEFAULT_RICKER_SAMPLES, RickerSpec, layered_section, ricker
from .vmd import decompose

PROGRAM_NAME = "gpr-denoise"

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERICAL = 3

logger = logging.getLogger(__name__)


def print_help() -> None:
    """Print help message."""
    print(f"""Usage: {PROGRAM_NAME} COMMAND [OPTIONS]

De-noise ground penetrating radar traces with variational mode decomposition
and a sample-entropy mode gate.

Commands:
  ricker      Write a Ricker wavelet trace
  section     Write a synthetic layered section (256 traces x 400 samples)
  forward     Simulate a common-offset profile with 2D FDTD
  addnoise    Add white Gaussian noise at an exact SNR
  decompose   Decompose one trace and write its modes
  denoise     De-noise every trace of a radargram
  snr         Measure the SNR of a radargram against a clean reference
  compare     Score VMD, EEMD and wavelet de-noising
  render      Render a radargram as a grayscale PGM B-scan
  setup       Store de-noising defaults in the settings file

Files:
  --in FILE             Input radargram (.gprd binary or .csv)
  --out FILE            Output file
  --clean FILE          Clean reference radargram
  --report FILE         Per-trace de-noising report (CSV)
  --config FILE         Forward model file (default: built-in void model)
  --settings FILE       Settings file (default: search for {CONFIG_FILENAME})
  --dt NS               Sampling interval of CSV input or of generated traces

Synthesis and noise:
  --fc MHZ              Wavelet center frequency (ricker: 50, section: 100)
  --samples N           Samples per generated trace
  --snr-db DB           Target SNR for addnoise
  --seed N              Noise seed (default: 0)

De-noising:
  --modes K             Number of modes (default: 1)
  --alpha A             Bandwidth penalty (default: 2000)
  --tau T               Dual ascent step (default: 0)
  --sampen-m M          Sample entropy embedding dimension (default: 2)
  --sampen-r R          Sample entropy tolerance, fraction of std (default: 0.2)
  --threshold R         Entropy threshold for keeping modes (default: 1.0)
  --strategy S          prefix or per-mode (default: prefix)
  --trace I             Trace to decompose (default: 0)
  --methods LIST        Comma-separated methods to compare: dwt,eemd,vmd
  --jobs N              Traces processed concurrently (default: 1)

Rendering:
  --clip P              Clip percentile of |amplitude| (default: 99)

Other:
  --color MODE          Colorize output: auto, always, never (default: auto)
  --debug               Enable debug logging
  -V, --version         Show version and exit
  -h, --help            Show this help and exit

Exit status: 0 success, 1 usage error, 2 data error, 3 numerical failure.

Examples:
  {PROGRAM_NAME} ricker --fc 50 --out clean.gprd
  {PROGRAM_NAME} addnoise --in clean.gprd --snr-db -13.769 --seed 7 --out noisy.gprd
  {PROGRAM_NAME} denoise --in noisy.gprd --clean clean.gprd --out denoised.gprd
  {PROGRAM_NAME} compare --in noisy.gprd --clean clean.gprd --seed 7 --out table.csv
  {PROGRAM_NAME} render --in denoised.gprd --out denoised.pgm
""")


def print_version() -> None:
    """Print version."""
    print(f"{PROGRAM_NAME} {version(PROGRAM_NAME)}")


def configure_logging(debug: bool) -> None:
    """Configure logging based on debug flag.

    Args:
        debug: Whether to enable debug logging
    """
    level = logging.DEBUG if debug else logging.WARNING
    logging.basicConfig(
        level=level,
        format="%(levelname)s: %(message)s",
    )


def resolve_settings(parsed: ParsedCommand) -> Settings:
    """Merge command-line overrides onto the stored settings."""
    settings = load_settings(parsed.settings_file)
    overrides = {
        name: getattr(parsed, name)
        for name in ("modes", "alpha", "tau", "sampen_m", "sampen_r", "threshold", "strategy", "jobs")
        if getattr(parsed, name) is not None
    }
    settings = replace(settings, **overrides)
    logger.debug("Resolved settings: %s", settings)
    return settings


def load_input(parsed: ParsedCommand, path: str) -> Radargram:
    return gprio.load_radargram(path, parsed.dt)


def write_report(reports: list[DenoiseReport], path: str) -> None:
    """Write per-trace de-noising reports as CSV."""
    with gprio.atomic_output(path, "w") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["trace", "modes_retained", "mask", "entropies", "iterations",
                         "converged", "snr_before_db", "snr_after_db", "error"])
        for index, report in enumerate(reports):
            writer.writerow([
                index,
                report.retained,
                "".join("1" if keep else "0" for keep in report.mask),
                " ".join(f"{e:.4f}" for e in report.entropies),
                report.iterations,
                int(report.converged),
                "" if report.snr_before is None else f"{report.snr_before:.4f}",
                "" if report.snr_after is None else f"{report.snr_after:.4f}",
                report.error or "",
            ])


def cmd_ricker(parsed: ParsedCommand, printer: SummaryPrinter) -> None:
    parsed.require("output")
    spec = RickerSpec(
        fc=parsed.fc if parsed.fc is not None else 50.0,
        dt=parsed.dt if parsed.dt is not None else DEFAULT_RICKER_DT,
        n=parsed.samples if parsed.samples is not None else DEFAULT_RICKER_SAMPLES,
    )
    gprio.save_radargram(Radargram.from_traces([ricker(spec)], 0.0), parsed.output)
    printer.print_success(
        f"Wrote {spec.fc:g} MHz Ricker wavelet ({spec.n} samples at {spec.dt:.4f} ns) to {parsed.output}"
    )


def cmd_section(parsed: ParsedCommand, printer: SummaryPrinter) -> None:
    parsed.require("output")
    options = {}
    if parsed.fc is not None:
        options["fc"] = parsed.fc
    if parsed.dt is not None:
        options["dt"] = parsed.dt
    if parsed.samples is not None:
        options["samples"] = parsed.samples
    section = layered_section(**options)
    gprio.save_radargram(section, parsed.output)
    printer.print_success(
        f"Wrote synthetic section ({section.n_traces} traces x {section.n_samples} samples) to {parsed.output}"
    )


def cmd_forward(parsed: ParsedCommand, printer: SummaryPrinter) -> None:
    parsed.require("output")
    model = load_model(parsed.config_file) if parsed.config_file else build_paper_model()
    radargram = fdtd_forward(model, jobs=parsed.jobs or 1)
    gprio.save_radargram(radargram, parsed.output)
    printer.print_success(
        f"Simulated {radargram.n_traces} traces x {radargram.n_samples} samples into {parsed.output}"
    )


def cmd_addnoise(parsed: ParsedCommand, printer: SummaryPrinter) -> None:
    parsed.require("input", "output", "snr_db")
    clean = load_input(parsed, parsed.input)
    noisy = add_noise(clean, parsed.snr_db, parsed.seed or 0)
    gprio.save_radargram(noisy, parsed.output)
    printer.print_snr(f"Wrote {parsed.output}, SNR", snr(clean, noisy).db)


def cmd_decompose(parsed: ParsedCommand, printer: SummaryPrinter) -> None:
    parsed.require("input", "output")
    radargram = load_input(parsed, parsed.input)
    radargram.require_traces()
    index = parsed.trace or 0
    if not 0 <= index < radargram.n_traces:
        raise UsageError(f"--trace {index} is out of range for {radargram.n_traces} traces")
    cfg = resolve_settings(parsed).denoise_config().vmd
    result = decompose(radargram.trace(index), cfg)
    gprio.save_radargram(Radargram.from_traces(result.modes, radargram.dx), parsed.output)
    printer.print_modes([float(w) for w in result.omegas], result.iterations, result.converged)


def cmd_denoise(parsed: ParsedCommand, printer: SummaryPrinter) -> None:
    parsed.require("input", "output")
    settings = resolve_settings(parsed)
    noisy = load_input(parsed, parsed.input)
    clean = load_input(parsed, parsed.clean) if parsed.clean else None
    output, reports = denoise_radargram(noisy, settings.denoise_config(), clean, jobs=settings.jobs)
    before = snr(clean, noisy).db if clean is not None else None
    after = snr(clean, output).db if clean is not None else None
    if parsed.report:
        write_report(reports, parsed.report)
    gprio.save_radargram(output, parsed.output)
    printer.print_denoise(reports, before, after)


def cmd_snr(parsed: ParsedCommand, printer: SummaryPrinter) -> None:
    parsed.require("input", "clean")
    printer.print_snr("SNR", snr(load_input(parsed, parsed.clean), load_input(parsed, parsed.input)).db)


def cmd_compare(parsed: ParsedCommand, printer: SummaryPrinter) -> None:
    parsed.require("input", "clean")
    settings = resolve_settings(parsed)
    noisy = load_input(parsed, parsed.input)
    clean = load_input(parsed, parsed.clean)
    configs = MethodConfigs(vmd=settings.denoise_config())
    rows = compare_methods(clean, noisy, parsed.methods, configs, seed=parsed.seed, jobs=settings.jobs)
    if parsed.output:
        write_table(rows, parsed.output)
    printer.print_comparison(rows)


def cmd_render(parsed: ParsedCommand, printer: SummaryPrinter) -> None:
    parsed.require("input", "output")
    radargram = load_input(parsed, parsed.input)
    clip = parsed.clip if parsed.clip is not None else gprio.DEFAULT_CLIP_PERCENTILE
    gprio.render_bscan(radargram, parsed.output, clip)
    printer.print_success(f"Rendered {radargram.n_traces}x{radargram.n_samples} B-scan to {parsed.output}")


def cmd_setup(parsed: ParsedCommand, printer: SummaryPrinter) -> None:
    settings = replace(
        Settings(),
        **{
            name: getattr(parsed, name)
            for name in ("modes", "alpha", "tau", "sampen_m", "sampen_r", "threshold", "strategy", "jobs")
            if getattr(parsed, name) is not None
        },
    )
    settings.denoise_config()
    config_path = write_settings(settings, parsed.settings_file)
    printer.print_success(f"Successfully wrote settings to {config_path}")


COMMANDS = {
    "ricker": cmd_ricker,
    "section": cmd_section,
    "forward": cmd_forward,
    "addnoise": cmd_addnoise,
    "decompose": cmd_decompose,
    "denoise": cmd_denoise,
    "snr": cmd_snr,
    "compare": cmd_compare,
    "render": cmd_render,
    "setup": cmd_setup,
}


def run(args: list[str]) -> int:
    """Parse and execute one command.

    Args:
        args: Command-line arguments without the program name

    Returns:
        Process exit status
    """
    if not args:
        print_help()
        return EXIT_USAGE

    if args[0] in ("-h", "--help"):
        print_help()
        return EXIT_OK

    if args[0] in ("-V", "--version"):
        print_version()
        return EXIT_OK

    try:
        parsed = parse_command(args)
    except UsageError as e:
        if str(e) == "VERSION":
            print_version()
            return EXIT_OK
        if str(e) == "HELP":
            print_help()
            return EXIT_OK
        print(f"Error: {e}", file=sys.stderr)
        print(f"Try '{PROGRAM_NAME} --help' for more information.", file=sys.stderr)
        return EXIT_USAGE

    configure_logging(parsed.debug)
    printer = SummaryPrinter(ColorFormatter(parsed.color))

    try:
        COMMANDS[parsed.command](parsed, printer)
    except UsageError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, OSError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_DATA
    except NumericalError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


def main() -> None:
    """Main entry point."""
    try:
        sys.exit(run(sys.argv[1:]))
    except KeyboardInterrupt:
        print("Received interrupt, exiting")
        sys.exit(EXIT_USAGE)


if __name__ == "__main__":
    main()

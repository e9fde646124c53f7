"""
Command-line entry point

Exit codes: 0 pass, 1 fixture failure, 2 structural failure, 3 input
error, 4 certificate failure, 5 search alarm, 64 usage.
"""
from pathlib import Path
from typing import List, Optional, Sequence, Tuple
import argparse
import json
import logging
import sys

from pydantic import ValidationError

from .acstruct import Endomorphism, endomorphism_from_payload, example_structures, is_hypercomplex, is_integrable
from .config import settings
from .database import record_search
from .errors import CertificateError, DimensionMismatchError, HcxError, InputError, LayoutError
from .liealg import LieAlgebra, algebra_from_payload, parse_algebra_spec, su2_power
from .models import EndomorphismPayload, IntegrabilityReport, LieAlgebraPayload, RunConfig, Subcommand
from .nonexistence.certificate import Certificate
from .nonexistence.checker import replay
from .nonexistence.decomposition import block_decompose, e_dimension_witness, subspace_dims
from .nonexistence.obstruction import hypercomplex_obstruction
from .nonexistence.proofs import CASES, VARIANTS, certificate_for_case, theorem_certificate
from .nonexistence.symbolic import compare_with_reference, symbolic_system
from .search import run_trials, summarize, system_oracle

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FIXTURE = 1
EXIT_STRUCTURAL = 2
EXIT_INPUT = 3
EXIT_CERTIFICATE = 4
EXIT_ALARM = 5
EXIT_USAGE = 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog=settings.APP_NAME, description="Left-invariant complex and hypercomplex structures on su(2)^m")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="Debug logging")
    parser.add_argument("-q", "--quiet", action="store_true", help="Only warnings and errors")
    sub = parser.add_subparsers(dest="subcommand", parser_class=_Parser)

    p = sub.add_parser("examples", help="Verify the fixtures J and J' on su(2)+su(2)")
    p.add_argument("--factor-dims", action="store_true", help="Print (dim E, dim F) for factor 1")
    p.add_argument("--mutate", metavar="FIXTURE:ROW:COL", help="Add 1 to one matrix entry (1-based) of J or J'")

    p = sub.add_parser("check", help="Check one structure or a hypercomplex triple")
    p.add_argument("--algebra", required=True, help="su2^m or a LieAlgebra JSON file")
    p.add_argument("structures", nargs="+", help="One structure, or I J K")
    p.add_argument("--factor", type=_positive_int, help="Factor for the dim E witness, or the first factor of the obstruction chase")

    p = sub.add_parser("derive-system", help="Print the coefficient equations of one factor")
    p.add_argument("--factor", default="j", help="Factor index or the symbol j")
    p.add_argument("--compare-paper", action="store_true", help="Compare against the printed equations")

    p = sub.add_parser("certify", help="Emit and replay the non-existence certificate")
    p.add_argument("--output", help="Certificate path (stdout when omitted)")
    p.add_argument("--case", choices=list(CASES) + list(VARIANTS), help="Emit one sub-certificate")
    p.add_argument("--replay", help="Replay an existing certificate file instead")

    p = sub.add_parser("search", help="Numerical search over conjugated quaternion triples on su(2)^4")
    p.add_argument("--trials", type=_positive_int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--optimize", action="store_true", help="Pattern-search descent after each sample")
    p.add_argument("--steps", type=_positive_int, default=None, help="Descent steps per trial")
    p.add_argument("--output", help="JSON report path (stdout when omitted)")
    p.add_argument("--record", action="store_true", help="Store the run in the trial ledger")
    p.add_argument("--system-oracle", action="store_true",
                   help="Minimize the reduced coefficient system instead; --trials counts random starts")
    return parser


def configure_logging(verbose: int = 0, quiet: bool = False) -> None:
    level = getattr(logging, settings.LOG_LEVEL.upper(), logging.INFO)
    if verbose:
        level = logging.DEBUG
    elif quiet:
        level = logging.WARNING
    logging.basicConfig(
        level=level,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
        force=True,
    )


def _to_config(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        subcommand=Subcommand(args.subcommand),
        algebra=getattr(args, "algebra", None),
        structures=getattr(args, "structures", None) or [],
        factor=str(args.factor) if getattr(args, "factor", None) is not None else None,
        trials=getattr(args, "trials", None),
        seed=getattr(args, "seed", None),
        optimize=getattr(args, "optimize", False),
        steps=getattr(args, "steps", None),
        output=getattr(args, "output", None),
        case=getattr(args, "case", None),
        replay=getattr(args, "replay", None),
        record=getattr(args, "record", False),
        verbosity=args.verbose,
    )


def _describe(name: str, report: IntegrabilityReport) -> str:
    status = "integrable" if report.passed else "NOT integrable"
    line = f"{name}: {status}; squares to -id: {report.squares_to_minus_id}; pairs checked: {report.pairs_checked}"
    failure = report.first_failing_pair
    if failure is not None:
        where = f" in factor {failure.factor}" if failure.factor is not None else ""
        line += f"; N(e_{failure.pair[0]}, e_{failure.pair[1]}) = ({', '.join(failure.value)}) at pair {failure.pair}{where}"
    return line


# examples -------------------------------------------------------------------------

def _mutate(fixtures: dict, spec: str) -> None:
    try:
        name, row, col = spec.split(":")
        row, col = int(row), int(col)
    except ValueError:
        raise UsageError(f"--mutate expects FIXTURE:ROW:COL, got {spec!r}")
    key = {"J": "J", "J'": "J'", "Jprime": "J'"}.get(name)
    if key is None:
        raise UsageError(f"unknown fixture {name!r}; expected J or J'")
    A = fixtures[key]
    if not (1 <= row <= A.dim and 1 <= col <= A.dim):
        raise UsageError(f"entry ({row}, {col}) outside a {A.dim}x{A.dim} matrix")
    value = A.matrix[row - 1, col - 1]
    fixtures[key] = A.with_entry(row - 1, col - 1, value + 1)
    logger.info(f"mutated {key} at ({row}, {col}): {value} -> {value + 1}")


def cmd_examples(args: argparse.Namespace) -> int:
    J, J_prime = example_structures()
    fixtures = {"J": J, "J'": J_prime}
    if args.mutate:
        _mutate(fixtures, args.mutate)
    code = EXIT_OK
    for name, A in fixtures.items():
        report = is_integrable(A.algebra, A)
        print(_describe(name, report))
        if not report.passed:
            code = EXIT_FIXTURE
        if args.factor_dims:
            dim_e, dim_f = subspace_dims(block_decompose(A, 1))
            print(f"{name}: (dim E, dim F) = ({dim_e}, {dim_f})")
    return code


# check ------------------------------------------------------------------------

def _read_json(path: str):
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as e:
        raise InputError(f"cannot read {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise InputError(f"{path} is not valid JSON: {e}") from e


def load_algebra(spec: str) -> LieAlgebra:
    g = parse_algebra_spec(spec)
    if g is not None:
        return g
    return algebra_from_payload(LieAlgebraPayload.model_validate(_read_json(spec)))


def load_structure(path: str, g: LieAlgebra) -> Endomorphism:
    payload = EndomorphismPayload.model_validate(_read_json(path))
    return endomorphism_from_payload(payload, g)


def _is_su2_power(g: LieAlgebra) -> bool:
    return g.factor_layout is not None and g == su2_power(len(g.factor_layout))


def _witness_lines(A: Endomorphism, factors: Sequence[int]) -> List[str]:
    lines = []
    for j in factors:
        w = e_dimension_witness(A, j)
        if w is not None:
            lines.append(
                f"Lemma lemSUj2dim violated in factor {j}: {w.spanning} spans E_{j}, "
                f"N(u, v) = ({', '.join(w.value.to_strings())})"
            )
    return lines


def cmd_check(args: argparse.Namespace) -> int:
    if len(args.structures) not in (1, 3):
        raise UsageError("check expects one structure or three (I J K)")
    g = load_algebra(args.algebra)
    structures = [load_structure(path, g) for path in args.structures]
    su2_shape = _is_su2_power(g)
    if len(structures) == 1:
        A = structures[0]
        report = is_integrable(g, A)
        print(_describe("structure", report))
        if report.passed:
            return EXIT_OK
        if su2_shape:
            factors = [args.factor] if args.factor else range(1, len(g.factor_layout) + 1)
            for line in _witness_lines(A, factors):
                print(line)
        return EXIT_STRUCTURAL

    I, J, K = structures
    report = is_hypercomplex(g, I, J, K)
    for name, ok in report.checks.items():
        print(f"{name}: {'pass' if ok else 'FAIL'}")
    for label, sub in report.integrability.items():
        print(_describe(label, sub))
    if report.passed:
        print("hypercomplex: yes")
        return EXIT_OK
    print(f"hypercomplex: no (first failure: {report.first_failure})")
    m = len(g.factor_layout) if su2_shape else 0
    if m >= 2:
        j = args.factor or 1
        if j > m:
            raise UsageError(f"--factor {j} is outside 1..{m}")
        k = j % m + 1
        obstruction = hypercomplex_obstruction(I, J, K, j, k)
        print(f"obstruction (factors {j}, {k}): {obstruction.message}")
    return EXIT_STRUCTURAL


# derive-system --------------------------------------------------------------------

def _factor_symbol(text: str):
    if text == "j":
        return "j"
    try:
        value = int(text)
    except ValueError:
        raise UsageError(f"--factor expects an integer or j, got {text!r}")
    if value < 1:
        raise UsageError("--factor must be positive")
    return value


def cmd_derive(args: argparse.Namespace) -> int:
    system = symbolic_system(_factor_symbol(args.factor))
    sys.stdout.write(system.to_text())
    if not args.compare_paper:
        return EXIT_OK
    matches = compare_with_reference(system)
    for m in matches:
        status = {1: "matched", -1: "matched up to sign", 0: "MISMATCH"}[m.sign]
        print(f"{m.name} ({m.anchor}): {status}")
    matched = sum(m.matched for m in matches)
    print(f"{matched}/{len(matches)} matched")
    return EXIT_OK if matched == len(matches) else EXIT_FIXTURE


# certify ----------------------------------------------------------------------

def _replay_text(text: str) -> Tuple[int, str]:
    try:
        cert = Certificate.parse(text)
    except InputError as e:
        return EXIT_CERTIFICATE, f"certificate rejected: {e}"
    result = replay(cert)
    if result.ok:
        return EXIT_OK, f"replay ok: {result.steps_checked} steps, QED {result.contradiction.value}"
    return EXIT_CERTIFICATE, f"replay failed at step {result.failed_step}: {result.message}"


def cmd_certify(args: argparse.Namespace) -> int:
    if args.replay:
        try:
            text = Path(args.replay).read_text(encoding="utf-8")
        except OSError as e:
            raise InputError(f"cannot read {args.replay}: {e}") from e
        code, message = _replay_text(text)
        print(message)
        return code

    try:
        cert = certificate_for_case(args.case) if args.case else theorem_certificate()
    except CertificateError as e:
        print(f"certificate generation failed: {e}")
        return EXIT_CERTIFICATE
    text = cert.to_text()
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
        logger.info(f"wrote {len(cert.steps)} steps to {args.output}")
    else:
        sys.stdout.write(text)
    # replay from the serialized form, not the in-memory object
    code, message = _replay_text(text)
    print(message, file=sys.stdout if args.output else sys.stderr)
    return code


# search -------------------------------------------------------------------------

def _cmd_oracle(args: argparse.Namespace) -> int:
    seed = args.seed if args.seed is not None else settings.HCX_SEARCH_SEED
    report = system_oracle(args.trials, seed, args.steps)
    payload = report.model_dump_json(indent=2)
    if args.output:
        Path(args.output).write_text(payload + "\n", encoding="utf-8")
    else:
        print(payload)
    if report.minimum > settings.HCX_ORACLE_THRESHOLD:
        return EXIT_OK
    logger.error(f"coefficient system minimum {report.minimum} is below {settings.HCX_ORACLE_THRESHOLD}")
    return EXIT_ALARM


def cmd_search(args: argparse.Namespace) -> int:
    if args.system_oracle:
        return _cmd_oracle(args)
    trials = args.trials or settings.HCX_SEARCH_TRIALS
    seed = args.seed if args.seed is not None else settings.HCX_SEARCH_SEED
    results = run_trials(trials, seed, args.optimize, args.steps)
    report = summarize(results, seed, args.optimize)
    payload = report.model_dump_json(include={"trials", "best_residual", "best_seed", "histogram"}, indent=2)
    if args.output:
        Path(args.output).write_text(payload + "\n", encoding="utf-8")
    else:
        print(payload)
    if args.record:
        run_id = record_search(report, results)
        print(f"recorded run {run_id}", file=sys.stderr)
    if report.best_residual > settings.HCX_ACCEPT_THRESHOLD:
        return EXIT_OK
    logger.error(
        f"best residual {report.best_residual} at {report.best_seed} is below "
        f"{settings.HCX_ACCEPT_THRESHOLD}; this contradicts the non-existence theorem"
    )
    return EXIT_ALARM


COMMANDS = {
    Subcommand.EXAMPLES: cmd_examples,
    Subcommand.CHECK: cmd_check,
    Subcommand.DERIVE_SYSTEM: cmd_derive,
    Subcommand.CERTIFY: cmd_certify,
    Subcommand.SEARCH: cmd_search,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not args.subcommand:
            raise UsageError("a subcommand is required")
    except UsageError as e:
        print(f"hcx: usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as e:
        # --help
        return EXIT_OK if not e.code else EXIT_USAGE

    configure_logging(args.verbose, args.quiet)
    try:
        config = _to_config(args)
        logger.debug(f"run config: {config.model_dump_json()}")
        return COMMANDS[config.subcommand](args)
    except UsageError as e:
        print(f"hcx: usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ValidationError as e:
        print(f"hcx: invalid input: {e}", file=sys.stderr)
        return EXIT_INPUT
    except (InputError, DimensionMismatchError, LayoutError) as e:
        print(f"hcx: input error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except HcxError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return EXIT_STRUCTURAL


def run() -> None:
    sys.exit(main())

"""
chordlab command line
enumerate, evolve, compare, check-lemmas, repro and serve
"""

import argparse
import logging
import sys
from typing import Any, Dict, List, Optional, Tuple

import uvicorn

from src.cli.repro import run_repro as run_bundled_examples
from src.core.config import (
    FORMAT_VERSION,
    LEMMAS,
    MODELS,
    MODES,
    SPECTRA,
    RunConfig,
    Settings,
    configure_logging,
    load_settings,
    resolve_run_config,
)
from src.core.exceptions import ChordlabError, ConfigError, InvalidArgumentError
from src.cutjoin.evolution import evolve, initial_condition
from src.cutjoin.operators import Model, assemble_operator
from src.diagrams.core import Mode
from src.diagrams.enumerator import EnumerationSpec, census
from src.lemmas.check import LemmaKind, check_all, check_lemma
from src.series.codec import census_to_dict, compare_documents, dump_json, load_json, series_to_dict

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_INVALID = 2

DEFAULT_EVOLVE_SITES = 6


def _backbone_list(text: str) -> List[int]:
    try:
        return [int(item) for item in text.split(",") if item.strip() != ""]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"invalid backbone list {text!r}") from e


def _chords(text: str):
    if text == "all":
        return "all"
    try:
        return int(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"--chords must be an integer or 'all', got {text!r}") from e


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file; explicit flags win over it")
    common.add_argument("--backbones", type=_backbone_list, action="append",
                        help="comma list of backbone lengths; repeat to extend the multiset")
    common.add_argument("--chords", type=_chords, help="chord count or 'all'")
    common.add_argument("--mode", "--orientation", dest="mode", choices=MODES)
    common.add_argument("--model", choices=MODELS)
    common.add_argument("--spectrum", choices=SPECTRA)
    common.add_argument("--connected", action="store_true", default=None)
    common.add_argument("--ymax", type=int)
    common.add_argument("--bmax", type=int)
    common.add_argument("--max-sites", dest="max_sites", type=int)
    common.add_argument("--out")
    common.add_argument("--seed", type=int)
    common.add_argument("--tol", type=float)
    common.add_argument("--threads", type=int)
    common.add_argument("--which", choices=("all",) + LEMMAS)
    common.add_argument("--n", type=int)
    common.add_argument("--trials", type=int)
    common.add_argument("--left")
    common.add_argument("--right")
    common.add_argument("--host")
    common.add_argument("--port", type=int)

    parser = argparse.ArgumentParser(prog="chordlab", description="Chord diagram enumeration and cut-and-join evolution")
    subparsers = parser.add_subparsers(dest="command", required=True)
    subparsers.add_parser("enumerate", parents=[common], help="exhaustive census of partial chord diagrams")
    subparsers.add_parser("evolve", parents=[common], help="cut-and-join evolution of the generating function")
    subparsers.add_parser("compare", parents=[common], help="diff two series/census documents")
    subparsers.add_parser("check-lemmas", parents=[common], help="finite-difference checks of the Miwa identities")
    subparsers.add_parser("repro", parents=[common], help="run the bundled worked examples")
    subparsers.add_parser("serve", parents=[common], help="start the HTTP API")
    return parser


def _flags(args: argparse.Namespace) -> Dict[str, Any]:
    flags = {key: value for key, value in vars(args).items() if key not in ("command", "config")}
    if args.backbones is not None:
        flags["backbones"] = tuple(i for group in args.backbones for i in group)
    return flags


def parse(argv: Optional[List[str]] = None, settings: Optional[Settings] = None) -> Tuple[RunConfig, Settings]:
    """argv -> validated RunConfig; argparse errors exit with status 2"""
    args = build_parser().parse_args(argv)
    settings = settings or load_settings()
    return resolve_run_config(args.command, _flags(args), settings, args.config), settings


def _emit(document: Dict[str, Any], out: Optional[str]) -> None:
    text = dump_json(document, out)
    if out:
        print(f"✅ wrote {out}")
    else:
        print(text)


def enumerate_document(config: RunConfig) -> Dict[str, Any]:
    if not config.backbones:
        raise ConfigError("enumerate needs at least one backbone length")
    spec = EnumerationSpec(config.backbones, config.chords, Mode(config.mode), config.connected)
    return census_to_dict(census(spec, threads=config.threads), config.spectrum)


def evolve_document(config: RunConfig) -> Dict[str, Any]:
    model, orientation = Model(config.model), Mode(config.mode)
    max_sites = config.max_sites if config.max_sites is not None else DEFAULT_EVOLVE_SITES
    init = initial_condition(model, orientation, config.bmax, max_sites=max_sites, y_max=config.ymax)
    series = evolve(assemble_operator(model, orientation), init, config.ymax)
    return series_to_dict(series, model=model.value, mode=orientation.value, max_sites=max_sites)


def lemma_document(config: RunConfig) -> Dict[str, Any]:
    if config.which == "all":
        reports = check_all(config.n, config.trials, config.tol, config.seed)
    else:
        reports = [check_lemma(LemmaKind(config.which), config.n, config.trials, config.tol, config.seed)]
    return {
        "version": FORMAT_VERSION,
        "kind": "lemma-report",
        "passed": all(report.passed for report in reports),
        "reports": [report.to_dict() for report in reports],
    }


def run_enumerate(config: RunConfig) -> int:
    _emit(enumerate_document(config), config.out)
    return EXIT_OK


def run_evolve(config: RunConfig) -> int:
    _emit(evolve_document(config), config.out)
    return EXIT_OK


def run_compare(config: RunConfig) -> int:
    if not config.left or not config.right:
        raise ConfigError("compare needs --left and --right")
    mismatch = compare_documents(load_json(config.left), load_json(config.right))
    if mismatch is None:
        print("✅ documents agree on every shared coefficient")
        return EXIT_OK
    mono, exponent, left, right = mismatch
    print(f"❌ first mismatch at x^{exponent} {mono}: left={left} right={right}")
    return EXIT_MISMATCH


def run_check_lemmas(config: RunConfig) -> int:
    document = lemma_document(config)
    _emit(document, config.out)
    return EXIT_OK if document["passed"] else EXIT_MISMATCH


def run_repro(config: RunConfig) -> int:
    items = run_bundled_examples()
    for item in items:
        print(item.line())
    return EXIT_OK if all(item.passed for item in items) else EXIT_MISMATCH


def run_serve(config: RunConfig) -> int:
    print(f"🌐 Starting chordlab API on http://{config.host}:{config.port}")
    print(f"📖 API Documentation available at http://{config.host}:{config.port}/docs")
    uvicorn.run("main:create_app", host=config.host, port=config.port, log_level="info", factory=True)
    return EXIT_OK


HANDLERS = {
    "enumerate": run_enumerate,
    "evolve": run_evolve,
    "compare": run_compare,
    "check-lemmas": run_check_lemmas,
    "repro": run_repro,
}


def run(config: RunConfig) -> int:
    """Dispatch one command; chordlab errors become exit statuses"""
    try:
        return HANDLERS[config.command](config)
    except (ConfigError, InvalidArgumentError) as e:
        logger.error("%s failed: %s", config.command, e)
        print(f"❌ {e}", file=sys.stderr)
        return EXIT_INVALID
    except ChordlabError as e:
        logger.error("%s failed: %s", config.command, e)
        print(f"❌ {e}", file=sys.stderr)
        return EXIT_MISMATCH


def main(argv: Optional[List[str]] = None) -> int:
    try:
        config, settings = parse(argv)
        configure_logging(settings.log_level)
    except (ConfigError, InvalidArgumentError) as e:
        print(f"❌ {e}", file=sys.stderr)
        return EXIT_INVALID
    if config.command == "serve":
        return run_serve(config)
    return run(config)

#!/usr/bin/env python
# PYTHON_ARGCOMPLETE_OK
#
# ############################################################################
# Copyright (c) 2026 RepCheck authors
# # All Rights Reserved
# See file LICENSE for details.
############################################################################

import os
import sys
import logging
import argparse
from traceback import print_exc

import argcomplete

from src.claims import COMMANDS, RunConfig, exit_status, run
from src.common import DEFAULT_BOUNDS, Bounds, RepCheckError
from src.suite_runner import default_manifest, load_manifest, run_all, write_aggregate

logger = logging.getLogger('RepCheck')

EXIT_INFRASTRUCTURE = 2

BOUND_PRESETS = {
    'desk': DEFAULT_BOUNDS,
    'small': Bounds(order=20000, size=1 << 12, basis=200, pairs=10 ** 5),
    'large': Bounds(order=2 * 10 ** 6, size=1 << 20, basis=2000, pairs=10 ** 7),
}


def parse_args(args=None, namespace=None):
    parser = argparse.ArgumentParser(formatter_class=argparse.RawDescriptionHelpFormatter,
                                     description="Finite-field verification of multiplicity-one statements "
                                                 "for Jacquet modules, Gelfand pairs and their orbit lemmas")
    show_full_help = '--full_help' in sys.argv

    def add_additional_option(*args, **kwargs):  # show command only with --full-help
        if not show_full_help:
            kwargs['help'] = argparse.SUPPRESS
        parser.add_argument(*args, **kwargs)

    parser.add_argument("command", choices=COMMANDS + ('all',), help="claim to verify, 'all' runs a manifest")

    # INSTANCE
    parser.add_argument("--q", type=int, help="order of the finite field")
    parser.add_argument("--n", type=int, help="first block size; matrix size for geometry, deligne, nuimage "
                                              "and chartab")
    parser.add_argument("--k", type=int, help="second block size; group size for keylemma and dualkey")
    parser.add_argument("--composition", type=str, help="comma-separated block sizes, e.g. 1,1,1")
    parser.add_argument("--prime", type=int, help="prime for modular character tables, chosen automatically if not set")

    # OUTPUT
    parser.add_argument("--out", "-o", type=str, help="JSON report path [default=repcheck_output/<command>.json]")
    parser.add_argument("--expect-fail", dest="expect_fail", action='store_true', default=False,
                        help="exit with 0 when the claim fails, e.g. for known counterexamples")
    parser.add_argument("--manifest", type=str, help="JSON manifest for 'all'; the acceptance matrix if not set")
    parser.add_argument("--jobs", "-t", type=int, default=1, help="number of manifest rows run in parallel")
    parser.add_argument("--cache-dir", dest="cache_dir", type=str,
                        help="folder for class and character tables [default=$REPCHECK_CACHE or "
                             "~/.config/RepCheck/cache]")
    parser.add_argument("--no-cache", dest="use_cache", action='store_false', default=True,
                        help="do not read or write cached tables")
    parser.add_argument("--debug", action='store_true', default=False, help="debug logging")
    parser.add_argument("--full_help", action='help', help="show full list of options")

    # BOUNDS
    add_additional_option("--bounds", choices=sorted(BOUND_PRESETS.keys()), default='desk', type=str,
                          help="preset of enumeration bounds")
    add_additional_option("--order-bound", dest="order_bound", type=int, default=None,
                          help="maximal order of an enumerated group")
    add_additional_option("--size-bound", dest="size_bound", type=int, default=None,
                          help="maximal number of candidate matrices in exhaustive sweeps")
    add_additional_option("--basis-bound", dest="basis_bound", type=int, default=None,
                          help="maximal dimension of a Hecke algebra")

    argcomplete.autocomplete(parser)
    args = parser.parse_args(args, namespace)
    set_bounds(args)
    if args.out is None:
        args.out = os.path.join("repcheck_output", args.command + ".json")
    return args


def set_bounds(args):
    preset = BOUND_PRESETS[args.bounds or 'desk']
    args.bounds = Bounds(order=args.order_bound or preset.order,
                         size=args.size_bound or preset.size,
                         basis=args.basis_bound or preset.basis,
                         pairs=preset.pairs)


def make_config(args):
    return RunConfig(args.command, args.q, args.n, args.k, args.composition, args.prime, args.bounds,
                     args.cache_dir, args.use_cache, args.out, args.jobs, args.expect_fail)


# Check user's params
def check_params(args):
    if args.jobs < 1:
        print("ERROR! Number of jobs must be positive")
        return False
    if any(b <= 0 for b in args.bounds):
        print("ERROR! Bounds must be positive")
        return False
    if args.command == 'all':
        if args.manifest is not None and not os.path.isfile(args.manifest):
            print("ERROR! Manifest " + args.manifest + " does not exist")
            return False
        return True
    try:
        args.config = make_config(args)
        args.config.validate()
    except (RepCheckError, ValueError) as err:
        print("ERROR! " + str(err))
        return False
    return True


def set_logger(args, logger_instance):
    level = logging.DEBUG if args.debug else logging.INFO
    logger_instance.setLevel(level)
    out_dir = os.path.dirname(os.path.abspath(args.out))
    os.makedirs(out_dir, exist_ok=True)
    log_file = os.path.join(out_dir, "repcheck.log")
    with open(log_file, "w") as f:
        f.write("CMD: " + ' '.join(sys.argv) + '\n')
    fh = logging.FileHandler(log_file)
    fh.setLevel(level)
    ch = logging.StreamHandler(sys.stdout)
    ch.setLevel(level)

    formatter = logging.Formatter('%(asctime)s - %(levelname)s - %(message)s')
    fh.setFormatter(formatter)
    ch.setFormatter(formatter)
    logger_instance.addHandler(fh)
    logger_instance.addHandler(ch)


def run_manifest(args):
    manifest = load_manifest(args.manifest) if args.manifest else default_manifest()
    aggregate = run_all(manifest, args.jobs, args.bounds, args.cache_dir, args.use_cache)
    write_aggregate(aggregate, args.out)
    return 0 if aggregate['passed'] else 1


def run_pipeline(args):
    logger.info(" === RepCheck %s started === " % args.command)
    if args.command == 'all':
        status = run_manifest(args)
    else:
        report = run(args.config)
        report.write(args.out)
        status = exit_status(report, args.expect_fail)
        if status:
            logger.warning("Claim %s: verdict %s%s" % (report.claim, report.verdict.value,
                                                      " while a failure was expected" if args.expect_fail else ""))
    logger.info(" === RepCheck %s finished === " % args.command)
    return status


def main(args):
    args = parse_args(args)
    if not check_params(args):
        return EXIT_INFRASTRUCTURE
    set_logger(args, logger)
    try:
        return run_pipeline(args)
    except (RepCheckError, OSError, ValueError) as err:
        logger.critical(str(err))
        return EXIT_INFRASTRUCTURE


if __name__ == "__main__":
    # stuff only to run when not called via 'import' here
    try:
        sys.exit(main(sys.argv[1:]))
    except SystemExit:
        raise
    except:
        print_exc()
        sys.exit(EXIT_INFRASTRUCTURE)

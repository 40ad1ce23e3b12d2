#
# Command line interface for goodcolim.
#
# Each subcommand loads its input files, runs one library operation,
# writes a certificate and prints a report (a rich table, or JSON with
# --json).  The exit status is 0 when everything converged or verified,
# 2 when a search ran out of budget, and 1 for bad input or a failed
# verification.

import argparse
import logging
import sys

from rich.console import Console
from rich.logging import RichHandler

from goodcolim.cli import (
    cmd_complete_poset,
    cmd_eliminate_retract,
    cmd_factorize,
    cmd_linearize,
    cmd_pushdown,
    cmd_suite,
    cmd_verify,
)
from goodcolim.config import GC, GoodColimError

args = None

def init_cli(argv=None):
    """
    Use argparse to create the command line API.  After parsing the
    arguments save them in a global variable named args.
    """
    parser = argparse.ArgumentParser(prog='goodcolim')

    parser.add_argument('--log', metavar='X', choices=['quiet','info','debug'])
    parser.add_argument('--json', action='store_true', help='print the report as JSON')
    parser.add_argument('--max-vertices', metavar='N', type=int, help='largest domain of a hom-set enumeration')
    parser.add_argument('--max-homs', metavar='N', type=int, help='largest hom-set an enumeration may produce')
    parser.add_argument('--budget', metavar='N', type=int, help='iteration budget for the searches')
    parser.add_argument('--seed', metavar='N', type=int, help='seed for random instances')
    parser.add_argument('--corpus', metavar='D', help='corpus directory (default: $GOODCOLIM_CORPUS or ./corpus)')

    commands = parser.add_subparsers(dest='command', required=True)

    p = commands.add_parser('factorize', help='factor morphisms by the small object argument')
    p.add_argument('inputs', metavar='F', nargs='+', help='morphism files')
    p.add_argument('--generators', metavar='F', help='generator set (default X_std)')
    p.add_argument('--mode', choices=['fat', 'classical'], default='fat')
    p.add_argument('--out', metavar='F', help='certificate file (a folder for several inputs)')

    p = commands.add_parser('verify', help='recompute the witnesses in certificates')
    p.add_argument('certificates', metavar='F', nargs='+', help='certificate files')
    p.add_argument('--generators', metavar='F', help='require certificates made with this generator set')

    p = commands.add_parser('linearize', help='rewrite a good diagram as a chain')
    p.add_argument('diagram', metavar='F')
    p.add_argument('--generators', metavar='F')
    p.add_argument('--out', metavar='F')

    p = commands.add_parser('complete-poset', help='extend a good poset to a directed one')
    p.add_argument('poset', metavar='F')
    p.add_argument('--kappa', metavar='K', default='omega', help='omega or a positive integer')
    p.add_argument('--plus', action='store_true', help='apply one plus step instead of adding a top')
    p.add_argument('--out', metavar='F')

    p = commands.add_parser('pushdown', help='push the cells of a diagram down to a stage')
    p.add_argument('diagram', metavar='F')
    p.add_argument('staged', metavar='F', help='staged presentation of the least object')
    p.add_argument('--generators', metavar='F')
    p.add_argument('--out', metavar='F')

    p = commands.add_parser('eliminate-retract', help='present the image of an idempotent as a cell complex')
    p.add_argument('diagram', metavar='F')
    p.add_argument('idempotent', metavar='F', help='idempotent on the colimit of the diagram')
    p.add_argument('--generators', metavar='F')
    p.add_argument('--out', metavar='F')

    p = commands.add_parser('suite', help='run the property suite')
    p.add_argument('--sizes', metavar='N', type=int, default=6, help='largest random shape')
    p.add_argument('--count', metavar='N', type=int, default=200, help='random instances per property')

    global args
    args = parser.parse_args(argv)
    args.argv = list(sys.argv[1:] if argv is None else argv)

def setup_logging():
    """
    Configure the logging module.
    """
    match args.log:
        case 'info':
            level = logging.INFO
        case 'debug':
            level = logging.DEBUG
        case _:
            level = logging.WARNING
    logging.basicConfig(
        level=level,
        style='{',
        format='{relativeCreated:4.0f} msec: {message}',
        handlers = [RichHandler(console=Console(stderr=True), markup=True, rich_tracebacks=True)],
        force=True,
    )

def run_command():
    """
    Dispatch to the cmd_ function for the subcommand.

    Returns:
        a RunReport
    """
    echo = ['goodcolim'] + args.argv
    match args.command:
        case 'factorize':
            return cmd_factorize(args.inputs, args.generators, args.mode, args.budget, args.out, command=echo)
        case 'verify':
            return cmd_verify(args.certificates, args.generators, command=echo)
        case 'linearize':
            return cmd_linearize(args.diagram, args.generators, args.out, command=echo)
        case 'complete-poset':
            return cmd_complete_poset(args.poset, args.kappa, args.plus, args.out, command=echo)
        case 'pushdown':
            return cmd_pushdown(args.diagram, args.staged, args.generators, args.out, command=echo)
        case 'eliminate-retract':
            return cmd_eliminate_retract(args.diagram, args.idempotent, args.generators, args.budget, args.out,
                                         command=echo)
        case 'suite':
            return cmd_suite(args.corpus, args.seed, args.sizes, args.count, args.budget, command=echo)

def main(argv=None):
    """
    Parse the command line, run the command and print its report.

    Returns:
        the exit status
    """
    init_cli(argv)
    setup_logging()
    try:
        GC.setup(args.max_vertices, args.max_homs, args.budget, args.corpus, args.seed)
        report = run_command()
    except ValueError as err:
        logging.error(err)
        return 1
    except GoodColimError as err:
        logging.error(f'{args.command}: {err}')
        return 1
    if args.json:
        sys.stdout.write(report.to_json())
    else:
        report.render()
    return report.exit_code

if __name__ == '__main__':
    sys.exit(main())

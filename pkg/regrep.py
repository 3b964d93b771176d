"""
REGREP - DRR / GRR DETECTION FOR GROUPS OF SQUAREFREE ORDER
Classifies groups, checks Cayley (di)graphs, searches and certifies witnesses,
and runs the reproducibility suites.

Usage:
    python regrep.py enumerate 42
    python regrep.py classify --order 21
    python regrep.py check D6 --grr --set "refl:all"
    python regrep.py witness F21 --kind digraph --strategy exhaustive
    python regrep.py verify quick
"""

import argparse
import json
import logging
import sys
import time
from typing import Any, Dict, List, Optional

from core.certificates import RunReport, WitnessCertificate, verify_witness_certificate
from core.errors import BudgetExhausted, RegrepError
from utils.host_detector import host_detector
from utils.literal_decoder import LiteralDecoder
from utils.log_setup import configure_logging
from utils.settings import get_settings, load_settings, reset_settings

logger = logging.getLogger('regrep')

EXIT_OK, EXIT_ERROR, EXIT_INCONCLUSIVE = 0, 1, 2


class Output:
    """Bracket-tagged console lines, silenced under --json"""

    def __init__(self, json_mode: bool):
        self.json_mode = json_mode

    def line(self, tag: str, message: str):
        if not self.json_mode:
            print(f"[{tag}] {message}")

    def text(self, message: str = ""):
        if not self.json_mode:
            print(message)


def print_header(out: Output, title: str):
    out.text("-" * 61)
    out.text(f"      REGREP - {title}")
    out.text("-" * 61)


def _named_subgroups(R, entries: Optional[List[str]]) -> Dict[str, List[int]]:
    named = {}
    for entry in entries or []:
        name, _, body = entry.partition('=')
        named[name.strip()] = LiteralDecoder.parse_subgroup(R, body.strip())
    return named


def _group_row(R) -> Dict[str, Any]:
    from core.group_automorphisms import automorphism_order
    return {'group': R.literal, 'name': R.describe(), 'order': R.order,
            'aut_order': automorphism_order(R)}


# --- subcommands ---

def cmd_enumerate(args, out: Output, report: RunReport) -> int:
    from core.squarefree_group import enumerate_groups

    groups = enumerate_groups(args.order)
    print_header(out, f"GROUPS OF ORDER {args.order}")
    for R in groups:
        row = _group_row(R)
        report.results.append(row)
        out.text(f"  {row['name']:<20} {row['group']:<36} |Aut| = {row['aut_order']}")
    out.line('OK', f"{len(groups)} isomorphism classes")
    return EXIT_OK


def cmd_classify(args, out: Output, report: RunReport) -> int:
    from core.classifier import classify
    from core.squarefree_group import enumerate_groups

    if args.group:
        groups = [LiteralDecoder.parse_group(args.group)]
    elif args.order:
        groups = enumerate_groups(args.order)
    else:
        raise RegrepError("classify needs a group literal or --order")

    print_header(out, "DETECTION CLASSIFICATION")
    out.text(f"  {'group':<20} {'DRR-det':<8} {'GRR-det':<8} {'clause':<10} citation")
    for R in groups:
        verdict = classify(R)
        report.results.append(verdict.to_dict())
        yes_no = lambda b: 'yes' if b else 'no'
        out.text(f"  {verdict.group_name:<20} {yes_no(verdict.drr_detecting):<8} "
                 f"{yes_no(verdict.grr_detecting):<8} {verdict.clause.value:<10} {verdict.citation}")
    return EXIT_OK


def _check_certificate(path: str, out: Output, report: RunReport) -> int:
    with open(path, 'r', encoding='utf-8') as f:
        certificate = WitnessCertificate.model_validate(json.load(f))
    verify_witness_certificate(certificate)
    report.results.append({'certificate': path, 'verified': True, 'group': certificate.group,
                           'kind': certificate.kind})
    out.line('OK', f"certificate verified: {certificate.group_name} {certificate.kind} witness, "
                   f"|Aut| = {certificate.aut_order}")
    return EXIT_OK


def cmd_check(args, out: Output, report: RunReport) -> int:
    from core.cayley import build_cayley, graph_automorphisms, normaliser_identity_check
    from core.group_automorphisms import set_stabilizer
    from core.wreath import check_star_star, find_gen_wreath

    if args.certificate:
        return _check_certificate(args.certificate, out, report)
    if not args.group or args.set is None:
        raise RegrepError("check needs a group literal and --set (or --certificate)")

    R = LiteralDecoder.parse_group(args.group)
    named = _named_subgroups(R, args.subgroup)
    S = LiteralDecoder.parse_set(R, args.set, named)
    graph = build_cayley(R, S)
    print_header(out, f"CHECK Cay({R.describe()}, S)")
    out.text(f"  S = {{{', '.join(graph.connection_set.words())}}}")

    aut_order = graph_automorphisms(graph).order()
    stabilizer = set_stabilizer(R, S)
    result: Dict[str, Any] = {
        'group': R.literal,
        'connection_set': graph.connection_set.words(),
        'inverse_closed': graph.is_graph,
        'aut_order': aut_order,
        'stabilizer_order': stabilizer.order,
    }
    out.line('OK', f"|Aut(Cay)| = {aut_order}, |Aut(R)_S| = {stabilizer.order}")

    if args.grr:
        if not graph.is_graph:
            raise RegrepError("--grr needs an inverse-closed set")
        result['is_grr'] = aut_order == R.order
        out.line('OK', f"is_grr = {str(result['is_grr']).lower()}")
    else:
        result['is_drr'] = aut_order == R.order
        out.line('OK', f"is_drr = {str(result['is_drr']).lower()}")

    if args.wreath:
        if args.K and args.H:
            K = R.subgroup(LiteralDecoder.parse_subgroup(R, args.K, named))
            H = R.subgroup(LiteralDecoder.parse_subgroup(R, args.H, named))
            certificate = check_star_star(R, S, K, H)
        else:
            certificate = find_gen_wreath(R, S)
        result['wreath'] = certificate.to_model().model_dump() if certificate else None
        out.line('OK' if certificate else 'WARN',
                 certificate.describe() if certificate else "no generalised wreath pair")

    if args.normaliser:
        check = normaliser_identity_check(R, S)
        result['normaliser'] = check.to_dict()
        out.line('PASS' if check.equal else 'FAIL',
                 f"|N_A(R)| = {check.normaliser_order}, |R.Aut(R)_S| = {check.product_order} ({check.method})")

    if args.dot:
        with open(args.dot, 'w', encoding='utf-8') as f:
            f.write(graph.to_dot())
        out.line('OK', f"DOT written to {args.dot}")

    report.results.append(result)
    return EXIT_OK


def _emit_certificate(certificate: WitnessCertificate, args, out: Output):
    if args.output:
        with open(args.output, 'w', encoding='utf-8') as f:
            f.write(certificate.to_json())
        out.line('OK', f"certificate written to {args.output}")
    if args.save:
        from utils.certificate_vault import CertificateVault
        vault = CertificateVault(get_settings().certificates.vault_path)
        cert_id = vault.store_certificate(certificate.model_dump(by_alias=True), label=certificate.group_name)
        out.line('OK', f"certificate stored as {cert_id}")


def cmd_witness(args, out: Output, report: RunReport) -> int:
    from core.certificates import NonExistenceReport
    from core.constructions import construct_witness
    from core.psl_witness import psl2_witness
    from core.witness_search import search_witness

    R = LiteralDecoder.parse_group(args.group)
    print_header(out, f"WITNESS SEARCH {R.describe()} ({args.kind})")

    if args.strategy == 'construct':
        result = construct_witness(R)
    elif args.strategy == 'psl2':
        result = psl2_witness(R.n)
    else:
        result = search_witness(R, args.kind, args.strategy, budget=args.budget, seed=args.seed)

    if isinstance(result, NonExistenceReport):
        report.results.append(result.model_dump(by_alias=True))
        out.line('OK', f"no {result.kind} witness: {result.representatives} orbit classes swept "
                       f"(orbit count {result.burnside_count}); {R.describe()} is "
                       f"{'DRR' if result.kind == 'digraph' else 'GRR'}-detecting")
        return EXIT_OK

    verify_witness_certificate(result)
    report.results.append(result.model_dump(by_alias=True))
    out.line('OK', f"witness: S = {{{', '.join(result.connection_words)}}}")
    out.line('OK', f"|Aut(Cay)| = {result.aut_order} > {R.order}, Aut(R)_S trivial "
                   f"(swept {result.stabilizer_sweep} automorphisms)")
    if result.wreath:
        out.text(f"  wreath pair: |K| = {result.wreath.K_order}, |H| = {result.wreath.H_order}")
    _emit_certificate(result, args, out)
    return EXIT_OK


def cmd_aut(args, out: Output, report: RunReport) -> int:
    from core.group_automorphisms import automorphism_group, set_stabilizer

    R = LiteralDecoder.parse_group(args.group)
    print_header(out, f"AUTOMORPHISMS OF {R.describe()}")
    if args.set is not None:
        S = LiteralDecoder.parse_set(R, args.set, _named_subgroups(R, args.subgroup))
        stabilizer = set_stabilizer(R, S)
        report.results.append(stabilizer.to_dict())
        out.line('OK', f"|Aut(R)| = {stabilizer.aut_order}, |Aut(R)_S| = {stabilizer.order}")
        for alpha in stabilizer.automorphisms:
            out.text(f"  {', '.join(alpha.to_dict()['words'])}")
        return EXIT_OK

    automorphisms = automorphism_group(R)
    report.results.append({'group': R.literal, 'aut_order': len(automorphisms),
                           'automorphisms': [a.to_dict() for a in automorphisms]})
    out.line('OK', f"|Aut(R)| = {len(automorphisms)}")
    for alpha in automorphisms:
        out.text(f"  {', '.join(alpha.to_dict()['words'])}")
    return EXIT_OK


def cmd_verify(args, out: Output, report: RunReport) -> int:
    from core.acceptance_suites import SUITES, SuiteContext, run_suite

    if args.suite != 'all' and args.suite not in SUITES:
        raise RegrepError(f"unknown suite {args.suite!r}; choose from all, {', '.join(SUITES)}")

    settings = get_settings()
    print_header(out, f"VERIFY {args.suite}")
    ctx = SuiteContext(seed=args.seed if args.seed is not None else settings.search.seed,
                       budget=args.budget, progress=settings.search.progress)
    results = run_suite(args.suite, ctx)

    failed = False
    for result in results:
        report.results.append(result.to_dict())
        tag = result.status
        if result.status == 'FAIL' and result.stretch:
            tag = 'WARN'
        out.line(tag, f"{result.name} ({result.elapsed:.1f}s) {result.description}"
                      + (f": {result.message}" if result.message else ""))
        failed |= not result.passed

    if args.report:
        from core.report_generator import VerificationReportGenerator
        generator = VerificationReportGenerator(settings.certificates.vault_path)
        path = generator.generate_report({
            'run_id': f"RUN-{time.strftime('%Y%m%d-%H%M%S')}-{args.suite}",
            'suite': args.suite,
            'seed': ctx.seed,
            'results': [r.to_dict() for r in results],
            'engine_limits': settings.engine.model_dump(),
            'host': host_detector.get_capabilities(),
            'certificates': [c.model_dump(by_alias=True) for c in ctx.certificates],
        })
        out.line('OK', f"report written to {path}")

    return EXIT_ERROR if failed else EXIT_OK


COMMANDS = {
    'enumerate': cmd_enumerate,
    'classify': cmd_classify,
    'check': cmd_check,
    'witness': cmd_witness,
    'aut': cmd_aut,
    'verify': cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--json', action='store_true', help='JSON report on stdout')
    common.add_argument('--seed', type=int, default=None, help='seed for randomized search')
    common.add_argument('--budget', type=int, default=None, help='randomized search budget (samples)')
    common.add_argument('--max-order', type=int, default=None, help='override engine.max_group_order')
    common.add_argument('--config', default=None, help='config file (default config/config.yaml)')
    common.add_argument('-v', '--verbose', action='store_true', help='debug logging')

    parser = argparse.ArgumentParser(prog='regrep', description=__doc__.strip().splitlines()[0])
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('enumerate', parents=[common], help='list groups of a squarefree order')
    p.add_argument('order', type=int)

    p = sub.add_parser('classify', parents=[common], help='detection verdicts')
    p.add_argument('group', nargs='?', help='group literal (C15, D30, F21, sqfree:t=..,n=..,m=..,j=..)')
    p.add_argument('--order', type=int, help='classify every group of this order')

    p = sub.add_parser('check', parents=[common], help='inspect one Cayley (di)graph')
    p.add_argument('group', nargs='?')
    p.add_argument('--set', dest='set', help='connection set: triples, words, cosets or refl:all')
    p.add_argument('--subgroup', action='append', help='NAME=<gens> for coset expressions')
    p.add_argument('--drr', action='store_true', help='report is_drr (default)')
    p.add_argument('--grr', action='store_true', help='report is_grr (S must be inverse-closed)')
    p.add_argument('--wreath', action='store_true', help='find or check a generalised wreath pair')
    p.add_argument('--K', help='K of the pair to check with --wreath')
    p.add_argument('--H', help='H of the pair to check with --wreath')
    p.add_argument('--normaliser', action='store_true', help='check N_A(R) = R.Aut(R)_S')
    p.add_argument('--dot', help='write Graphviz DOT to this file')
    p.add_argument('--certificate', help='re-verify a witness certificate JSON file')

    p = sub.add_parser('witness', parents=[common], help='search or construct a witness')
    p.add_argument('group')
    p.add_argument('--kind', choices=['digraph', 'graph'], default='digraph')
    p.add_argument('--strategy', default='exhaustive',
                   choices=['exhaustive', 'exhaustive_orbit_reduced', 'structured_first',
                            'randomized', 'ladder', 'construct', 'psl2'])
    p.add_argument('--output', help='write the certificate JSON here')
    p.add_argument('--save', action='store_true', help='store the certificate in the vault')

    p = sub.add_parser('aut', parents=[common], help='Aut(R) or Aut(R)_S')
    p.add_argument('group')
    p.add_argument('--set', dest='set')
    p.add_argument('--subgroup', action='append')

    p = sub.add_parser('verify', parents=[common], help='run reproducibility suites')
    p.add_argument('suite', help='suite name, quick or all')
    p.add_argument('--report', action='store_true', help='write a markdown report to the vault')
    return parser


def _apply_overrides(args):
    settings = load_settings(args.config)
    if args.max_order is not None:
        settings.engine.max_group_order = args.max_order
    if args.seed is not None:
        settings.search.seed = args.seed
    if args.budget is not None:
        settings.search.randomized_budget = args.budget
    if args.json:
        settings.search.progress = False
    reset_settings(settings)
    return settings


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    settings = _apply_overrides(args)
    configure_logging(settings, verbose=args.verbose)
    out = Output(args.json)

    report = RunReport(command=args.command,
                       inputs={k: v for k, v in vars(args).items() if k != 'command'},
                       seed=settings.search.seed,
                       engine_limits=settings.engine.model_dump())
    started = time.time()
    code = EXIT_OK
    error = None
    try:
        code = COMMANDS[args.command](args, out, report)
    except BudgetExhausted as e:
        code, error = EXIT_INCONCLUSIVE, e
        report.limits_hit.append('randomized_budget')
        out.line('WARN', f"inconclusive: {e.message}")
    except RegrepError as e:
        code, error = EXIT_ERROR, e
        if not args.json:
            print(f"[ERROR] {e.code}: {e}", file=sys.stderr)
    except OSError as e:
        code, error = EXIT_ERROR, RegrepError(str(e))
        if not args.json:
            print(f"[ERROR] {e}", file=sys.stderr)

    report.elapsed_seconds = round(time.time() - started, 3)
    if args.json:
        payload = report.model_dump(by_alias=True)
        if error is not None:
            payload['error'] = error.to_dict()
        print(json.dumps(payload, indent=2, default=str))
    return code


if __name__ == "__main__":
    sys.exit(main())

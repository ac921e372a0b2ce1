#!/usr/bin/env python
"""
Command-line front end for incidence geometry over local rings
Builds planes, verifies axioms, coordinatizes, decomposes morphisms and
replays the counterexample suite. Reports are deterministic text; exit code
0 means success, 1 a mathematical failure, 2 a usage or parse error.
"""

import sys
import argparse
from typing import List, Optional, Tuple
from pydantic import BaseModel, Field, ValidationError
from config import settings, debug_print
from orchestrator import GeometryOrchestrator, MATH_ERRORS, USAGE_ERRORS, TORSOR_KINDS
from geometry.coordinatize import AxiomSuiteError


EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


class Command(BaseModel):
    """Validated flags of one invocation"""
    subcommand: str
    ring: Optional[str] = None
    target_ring: Optional[str] = None
    kind: Optional[str] = None
    theory: Optional[str] = None
    inputs: List[str] = []
    output: Optional[str] = None
    morphism: Optional[str] = None
    frame: Optional[Tuple[int, ...]] = None
    source_line: Optional[int] = Field(None, ge=0)
    target_line: Optional[int] = Field(None, ge=0)
    seed: int = Field(settings.seed, ge=0)
    samples: int = Field(settings.samples, gt=0)


class UsageError(ValueError):
    """Raised for flags that parse but make no sense together"""


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as f:
            return f.read()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}")


def _write(path: Optional[str], text: str):
    if path is None:
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8") as f:
            f.write(text)
    except OSError as e:
        raise UsageError(f"cannot write {path}: {e.strerror}")


def _parse_frame(text: Optional[str]) -> Optional[Tuple[int, ...]]:
    if text is None:
        return None
    parts = [p.strip() for p in text.split(",")]
    if len(parts) not in (3, 4) or not all(p.isdigit() for p in parts):
        raise UsageError(f"--frame takes X,Y,O or A,B,O,I point indices, got '{text}'")
    return tuple(int(p) for p in parts)


def _table(title: str, op: str, labels: List[str], table: List[List[int]]) -> List[str]:
    width = max(len(s) for s in labels)

    def cell(s: str) -> str:
        return s.rjust(width)

    out = [title, f"{cell(op)} | " + " ".join(cell(s) for s in labels)]
    out += [f"{cell(labels[x])} | " + " ".join(cell(labels[y]) for y in row) for x, row in enumerate(table)]
    return out


def _emit(lines: List[str]):
    for line in lines:
        print(line)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def build_command(cmd: Command, orchestrator: GeometryOrchestrator) -> int:
    """Build command: export ℙ(R) or 𝔸(R) in the plane file format"""
    result = orchestrator.build_plane(cmd.ring, cmd.kind)
    _write(cmd.output, result["plane_text"])
    if cmd.output is not None:
        print(f"PLANE {result['kind']} {result['ring']} points={result['n_points']} lines={result['n_lines']}")
    return EXIT_OK


def verify_command(cmd: Command, orchestrator: GeometryOrchestrator) -> int:
    """Verify command: run the axiom suite of a plane file"""
    result = orchestrator.verify_plane_text(_read(cmd.inputs[0]), cmd.theory, seed=cmd.seed, samples=cmd.samples)
    _emit(result["lines"])
    return EXIT_OK if result["passed"] else EXIT_FAILURE


def counterexamples_command(cmd: Command, orchestrator: GeometryOrchestrator) -> int:
    """Counterexamples command: replay the recorded counterexamples"""
    findings = orchestrator.counterexamples()
    _emit([f.line() for f in findings])
    reproduced = sum(f.reproduced for f in findings)
    print(f"{reproduced}/{len(findings)} counterexamples reproduced")
    return EXIT_OK if reproduced == len(findings) else EXIT_FAILURE


def coordinatize_command(cmd: Command, orchestrator: GeometryOrchestrator) -> int:
    """Coordinatize command: ring tables of Tp and the coordinate isomorphism"""
    try:
        result = orchestrator.coordinatize(_read(cmd.inputs[0]), cmd.frame, seed=cmd.seed, samples=cmd.samples)
    except AxiomSuiteError as e:
        _emit(f.line() for f in e.report.failures())
        raise
    labels = result["labels"]
    out = [f"RING Tp size={result['ring_size']} frame=({','.join(str(p) for p in result['frame'])})"]
    if result["identified_as"]:
        out.append(f"RING isomorphic to {result['identified_as']}")
    out += _table("ADD", "+", labels, result["add_table"])
    out += _table("MUL", "*", labels, result["mul_table"])
    out += [f"POINT {coords} -> {index}" for coords, index in result["point_table"]]
    out += result["isomorphism_lines"]
    _emit(out)
    return EXIT_OK if result["isomorphism"] else EXIT_FAILURE


def decompose_command(cmd: Command, orchestrator: GeometryOrchestrator) -> int:
    """Decompose command: split a ring-plane morphism into a matrix and a ring homomorphism"""
    result = orchestrator.decompose(cmd.ring, cmd.target_ring, cmd.kind, _read(cmd.morphism))
    out = [f"MATRIX {result['matrix']}"]
    out += [f"HOM {a} -> {b}" for a, b in result["homomorphism"]]
    _emit(out)
    return EXIT_OK


def extend_command(cmd: Command, orchestrator: GeometryOrchestrator) -> int:
    """Extend command: extend an affine morphism of derived planes to the projective planes"""
    source, target = cmd.inputs
    result = orchestrator.extend(
        _read(source), _read(target), cmd.source_line, cmd.target_line, _read(cmd.morphism),
    )
    _write(cmd.output, result["morphism_text"])
    _emit(result["lines"])
    return EXIT_OK if result["passed"] else EXIT_FAILURE


def check_morphism_command(cmd: Command, orchestrator: GeometryOrchestrator) -> int:
    """Check-morphism command: relation preservation, and reflection for isomorphisms"""
    source, target = cmd.inputs
    result = orchestrator.check_morphism(_read(source), _read(target), _read(cmd.morphism),
                                         isomorphism=cmd.kind == "isomorphism")
    _emit(result["lines"])
    return EXIT_OK if result["passed"] else EXIT_FAILURE


def torsor_command(cmd: Command, orchestrator: GeometryOrchestrator) -> int:
    """Torsor command: free and transitive group actions on frames"""
    result = orchestrator.torsor(cmd.ring, cmd.kind, seed=cmd.seed)
    _emit(result["lines"])
    return EXIT_OK if result["passed"] else EXIT_FAILURE


def serve_command(args) -> int:
    """Serve command: start the HTTP API"""
    import uvicorn
    print(f"\n🚀 Starting API on {args.host}:{args.port}...")
    try:
        uvicorn.run("main:app", host=args.host, port=args.port)
    except KeyboardInterrupt:
        print("\n\n✓ Application stopped")
    return EXIT_OK


COMMANDS = {
    "build": build_command,
    "export": build_command,
    "verify": verify_command,
    "counterexamples": counterexamples_command,
    "coordinatize": coordinatize_command,
    "decompose": decompose_command,
    "extend": extend_command,
    "check-morphism": check_morphism_command,
    "torsor": torsor_command,
}


def _command(args) -> Command:
    inputs = [getattr(args, name) for name in ("plane", "source", "target") if getattr(args, name, None)]
    return Command(
        subcommand=args.command,
        ring=getattr(args, "ring", None),
        target_ring=getattr(args, "target_ring", None),
        kind=getattr(args, "kind", None),
        theory=getattr(args, "theory", None),
        inputs=inputs,
        output=getattr(args, "output", None),
        morphism=getattr(args, "morphism", None),
        frame=_parse_frame(getattr(args, "frame", None)),
        source_line=getattr(args, "source_line", None),
        target_line=getattr(args, "target_line", None),
        seed=getattr(args, "seed", settings.seed),
        samples=getattr(args, "samples", settings.samples),
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="Incidence geometry over local rings: planes, axioms, coordinates and morphisms"
    )
    subparsers = parser.add_subparsers(dest="command", help="Command to run")

    # Build / export command
    for name in ("build", "export"):
        sub = subparsers.add_parser(name, help="Export the plane over a finite ring")
        sub.add_argument("--ring", default=settings.default_ring, help="zmod:N or dual:P")
        sub.add_argument("--kind", choices=["affine", "projective"], default="projective")
        sub.add_argument("--output", help="Plane file to write (default: stdout)")

    # Verify command
    verify_parser = subparsers.add_parser("verify", help="Verify the axioms of a plane file")
    verify_parser.add_argument("plane", help="Plane file")
    verify_parser.add_argument("--theory", choices=["affine", "projective"], help="Defaults to the plane's kind")
    verify_parser.add_argument("--seed", type=int, default=settings.seed, help="Seed for sampled checks")
    verify_parser.add_argument("--samples", type=int, default=settings.samples, help="Sampled configurations")

    # Counterexamples command
    subparsers.add_parser("counterexamples", help="Replay the counterexample suite")

    # Coordinatize command
    coord_parser = subparsers.add_parser("coordinatize", help="Coordinate ring and isomorphism of a plane")
    coord_parser.add_argument("plane", help="Plane file")
    coord_parser.add_argument("--frame", help="X,Y,O (affine) or A,B,O,I (projective) point indices")
    coord_parser.add_argument("--seed", type=int, default=settings.seed, help="Seed for sampled checks on Tp's plane")
    coord_parser.add_argument("--samples", type=int, default=settings.samples, help="Sampled configurations")

    # Decompose command
    decompose_parser = subparsers.add_parser("decompose", help="Split a morphism of ring planes")
    decompose_parser.add_argument("--ring", required=True, help="Source ring")
    decompose_parser.add_argument("--target-ring", required=True, help="Target ring (local)")
    decompose_parser.add_argument("--kind", choices=["affine", "projective"], default="projective")
    decompose_parser.add_argument("--morphism", required=True, help="Morphism file")

    # Extend command
    extend_parser = subparsers.add_parser("extend", help="Extend an affine morphism to projective planes")
    extend_parser.add_argument("--source", required=True, help="Source projective plane file")
    extend_parser.add_argument("--target", required=True, help="Target projective plane file")
    extend_parser.add_argument("--source-line", type=int, required=True, help="Line at infinity of the source")
    extend_parser.add_argument("--target-line", type=int, required=True, help="Line at infinity of the target")
    extend_parser.add_argument("--morphism", required=True, help="Morphism file of the derived affine planes")
    extend_parser.add_argument("--output", help="Morphism file to write (default: stdout)")

    # Check-morphism command
    check_parser = subparsers.add_parser("check-morphism", help="Check a morphism file against two planes")
    check_parser.add_argument("--source", required=True, help="Source plane file")
    check_parser.add_argument("--target", required=True, help="Target plane file")
    check_parser.add_argument("--morphism", required=True, help="Morphism file")
    check_parser.add_argument("--isomorphism", dest="kind", action="store_const", const="isomorphism",
                              help="Also check bijectivity and reflection")

    # Torsor command
    torsor_parser = subparsers.add_parser("torsor", help="Verify a torsor")
    torsor_parser.add_argument("--ring", default=settings.default_ring, help="zmod:N or dual:P")
    torsor_parser.add_argument("--kind", choices=list(TORSOR_KINDS), default="affine")
    torsor_parser.add_argument("--seed", type=int, default=settings.seed, help="Seed for sampled law checks")

    # Serve command
    serve_parser = subparsers.add_parser("serve", help="Start the HTTP API")
    serve_parser.add_argument("--host", default=settings.api_host)
    serve_parser.add_argument("--port", type=int, default=settings.api_port)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point"""
    parser = build_parser()
    args = parser.parse_args(argv)

    if not args.command:
        parser.print_help()
        return EXIT_USAGE

    if args.command == "serve":
        return serve_command(args)

    try:
        cmd = _command(args)
        debug_print(f"running {cmd.subcommand} with seed={cmd.seed} samples={cmd.samples}")
        return COMMANDS[cmd.subcommand](cmd, GeometryOrchestrator())
    except (ValidationError, UsageError) + USAGE_ERRORS as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except MATH_ERRORS as e:
        print(f"failure: {e}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())

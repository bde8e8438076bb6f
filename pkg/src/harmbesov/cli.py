"""Command line front end: ``harmbesov <campaign> [options]``.

Exit status is 0 when every check passes, 1 when any check fails and 2 for
configuration errors.
"""

from __future__ import annotations

import argparse
import sys

from .campaigns import CAMPAIGNS, CampaignConfig, ConfigError, run_campaign

FLAGS = {
    "dim": int, "p": float, "alpha": float, "beta": float, "s": float, "t": float,
    "degree": int, "radial_nodes": int, "sphere_nodes": int, "seed": int, "tol_scale": float,
    "out": str, "format": str, "parallel": int,
}


def read_config_file(path: str) -> dict:
    """key = value lines; '#' starts a comment."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key = value")
            key, val = (part.strip() for part in line.split("=", 1))
            out[key.replace("-", "_")] = val
    return out


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="harmbesov", description="Run verification campaigns.")
    ap.add_argument("campaign", nargs="?", default="all", choices=CAMPAIGNS + ("all",))
    for name, typ in FLAGS.items():
        flag = "--" + name.replace("_", "-")
        if name == "format":
            ap.add_argument(flag, choices=("json", "csv"), default=None)
        else:
            ap.add_argument(flag, type=typ, default=None)
    ap.add_argument("--config", default=None, help="key=value file; flags override it")
    return ap


def _error(msg: str) -> int:
    print(f"harmbesov: config error: {msg}", file=sys.stderr)
    return 2


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    values = {}
    try:
        if args.config:
            values.update(read_config_file(args.config))
        values.update({k: getattr(args, k) for k in FLAGS if getattr(args, k) is not None})
        cfg = CampaignConfig.from_mapping(values)
    except (ConfigError, OSError, ValueError, TypeError) as err:
        return _error(str(err))
    report = run_campaign(cfg, args.campaign)
    text = report.to_json() if cfg.format == "json" else report.to_csv()
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    for c in report.checks:
        print(f"{'PASS' if c.passed else 'FAIL'}  {c.name}", file=sys.stderr)
    return 0 if report.passed else 1

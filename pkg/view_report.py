import sys
from typing import TextIO

from schemas import Report


def _print(line: str, stream: TextIO):
    print(line, file=stream)


def display_report(report: Report, stream: TextIO = None):
    """Display a report in a readable way (stderr by default)"""
    stream = stream or sys.stderr
    _print(f"🔷 F-CRYSTAL {report.command.upper()} 🔷", stream)
    _print("=" * 50, stream)

    data = report.data
    if "hodge" in data and "newton" in data:
        _print(f"\n📐 Ring: p={data.get('p')} a={data.get('a')} N={data.get('N')}", stream)
        _print(f"   Rank: {data.get('n')} | val(det A): {data.get('det_valuation')}", stream)
        _print(f"   Hodge slopes:  {', '.join(data['hodge'])}", stream)
        _print(f"   Newton slopes: {', '.join(data['newton'])}", stream)

    if report.verdicts:
        _print("\n🧾 VERDICTS:", stream)
        for verdict in report.verdicts:
            mark = "✅" if verdict.passed else "❌"
            _print(f"  {mark} {verdict.name}", stream)
            if not verdict.passed and "message" in verdict.details:
                _print(f"     {verdict.details['message']}", stream)

    if "fibers" in data:
        _print("\n🧩 FIBERS:", stream)
        for fiber in data["fibers"]:
            note = f" ({fiber['message']})" if fiber["message"] else ""
            _print(f"  fiber {fiber['index']}: {fiber['status']}{note}", stream)

    if report.achieved_precision is not None:
        _print(f"\n🎯 Achieved precision: p^{report.achieved_precision}", stream)
    _print(f"🚪 Exit code: {report.exit_code}", stream)

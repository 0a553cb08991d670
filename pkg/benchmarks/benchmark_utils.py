import timeit
from statistics import fmean, median, pstdev

from tabulate import tabulate

UNITS = {"s": 1, "ms": 1_000, "us": 1_000_000}


def scale_for(unit: str) -> int:
    try:
        return UNITS[unit.lower()]
    except KeyError:
        raise ValueError(f"unknown time unit {unit!r}, use one of {', '.join(UNITS)}")


class BenchmarkGroup:
    """Times a list of (name, statement) pairs sharing one globals dict."""

    def __init__(
        self,
        name: str,
        cases: list[tuple[str, str]],
        globs: dict,
        unit: str,
        precision: int,
        number: int,
        repeat: int,
    ):
        self.name = name
        self.cases = cases
        self.globs = globs
        self.unit = unit
        self.precision = precision
        self.number = number
        self.repeat = repeat
        self.means: list[float] = []

    def run(self) -> None:
        print(self.name.upper())
        print("=" * 50)
        rows = []
        for case_name, statement in self.cases:
            timings = timeit.repeat(
                statement, globals=self.globs, number=self.number, repeat=self.repeat
            )
            self.means.append(fmean(timings))
            rows.append(
                [
                    case_name,
                    self.adjust(fmean(timings) / self.number),
                    self.adjust(min(timings) / self.number),
                    self.adjust(pstdev(timings) / self.number),
                ]
            )
        print(
            tabulate(
                rows,
                headers=["Name", "Mean", "Best", "Std Dev"],
                tablefmt="github",
                numalign="center",
                stralign="center",
            )
        )
        print("\n" + "-" * 50)
        print(f"Group median per call: {self.adjust(median(self.means) / self.number)} {self.unit}")
        print("\n")

    def adjust(self, seconds: float) -> float:
        return round(seconds * scale_for(self.unit), self.precision)


class BenchmarkSuite:
    def __init__(
        self,
        title: str,
        groups: list[tuple[str, list[tuple[str, str]]]],
        globs: dict,
        number: int = 10,
        repeat: int = 5,
        unit: str = "ms",
        precision: int = 3,
    ) -> None:
        scale_for(unit)
        self.title = title
        self.unit = unit
        self.groups = [
            BenchmarkGroup(name, cases, globs, unit, precision, number, repeat)
            for name, cases in groups
        ]
        self.number = number
        self.repeat = repeat

    def run_suite(self) -> None:
        width = int(len(self.title) * 1.5)
        print("=" * width)
        print(self.title.upper().center(width))
        print("=" * width)
        print(
            f"- {self.number} calls per timing, {self.repeat} timings per case, "
            f"times in {self.unit} per call\n"
        )
        for group in self.groups:
            group.run()
        total = sum(sum(group.means) for group in self.groups) * self.repeat
        print("_" * width)
        print(f"\nSuite total time: {round(total, 2)} s")

from dataclasses import dataclass, field

import pandas as pd

TRACE_COLUMNS = ("t", "alpha", "objective", "overlap", "cumulative_shots")


@dataclass(frozen=True)
class TraceRecord:
    t: int
    alpha: float
    objective: float
    overlap: float
    cumulative_shots: int


@dataclass
class RunTrace:
    """
    One record per objective evaluation of a run, in call order.

    ``final_overlap`` is the overlap of the state the run hands back, which
    need not be the last evaluated state.
    """

    records: list[TraceRecord] = field(default_factory=list)
    final_overlap: float | None = None

    def append(self, alpha: float, objective: float, overlap: float, shots: int):
        t = len(self.records)
        cumulative = shots + (self.records[-1].cumulative_shots if self.records else 0)
        self.records.append(TraceRecord(t, alpha, objective, overlap, cumulative))

    @property
    def evaluations(self) -> int:
        return len(self.records)

    @property
    def last(self) -> TraceRecord:
        if not self.records:
            raise IndexError("trace is empty")
        return self.records[-1]

    @property
    def cumulative_shots(self) -> int:
        return self.records[-1].cumulative_shots if self.records else 0

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [
                (r.t, r.alpha, r.objective, r.overlap, r.cumulative_shots)
                for r in self.records
            ],
            columns=list(TRACE_COLUMNS),
        )

    @classmethod
    def from_frame(cls, frame: pd.DataFrame, final_overlap: float | None = None):
        missing = set(TRACE_COLUMNS) - set(frame.columns)
        if missing:
            raise ValueError(f"trace frame lacks columns {sorted(missing)}")

        records = [
            TraceRecord(
                t=int(row.t),
                alpha=float(row.alpha),
                objective=float(row.objective),
                overlap=float(row.overlap),
                cumulative_shots=int(row.cumulative_shots),
            )
            for row in frame.itertuples(index=False)
        ]
        return cls(records=records, final_overlap=final_overlap)

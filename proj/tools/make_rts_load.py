#!/usr/bin/env python3
"""Regenerates data/ieee_rts_load_8736.csv from the IEEE RTS-79 load profile tables."""
import sys

PEAK_KW = 5500.0

WEEKLY = [86.2, 90.0, 87.8, 83.4, 88.0, 84.1, 83.2, 80.6, 74.0, 73.7, 71.5, 72.7, 70.4,
          75.0, 72.1, 80.0, 75.4, 83.7, 87.0, 88.0, 85.6, 81.1, 90.0, 88.7, 89.6, 86.1,
          75.5, 81.6, 80.1, 88.0, 72.2, 77.6, 80.0, 72.9, 72.6, 70.5, 78.0, 69.5, 72.4,
          72.4, 74.3, 74.4, 80.0, 88.1, 88.5, 90.9, 94.0, 89.0, 94.2, 97.0, 100.0, 95.2]

DAILY = [93, 100, 98, 96, 94, 77, 75]  # Monday first

# Columns: winter weekday/weekend, summer weekday/weekend, spring-fall weekday/weekend.
HOURLY = [
    [67, 78, 64, 74, 63, 75], [63, 72, 60, 70, 62, 73], [60, 68, 58, 66, 60, 69],
    [59, 66, 56, 65, 58, 66], [59, 64, 56, 64, 59, 65], [60, 65, 58, 62, 65, 65],
    [74, 66, 64, 62, 72, 68], [86, 70, 76, 66, 85, 74], [95, 80, 87, 81, 95, 83],
    [96, 88, 95, 86, 99, 89], [96, 90, 99, 91, 100, 92], [95, 91, 100, 93, 99, 94],
    [95, 90, 99, 93, 93, 91], [95, 88, 100, 92, 92, 90], [93, 87, 100, 91, 90, 90],
    [94, 87, 97, 91, 88, 86], [99, 91, 96, 92, 90, 85], [100, 100, 96, 94, 92, 88],
    [100, 99, 93, 95, 96, 92], [96, 97, 92, 95, 98, 100], [91, 94, 92, 100, 96, 97],
    [83, 92, 93, 93, 90, 95], [73, 87, 87, 88, 80, 90], [63, 81, 72, 80, 70, 85],
]


def season_column(week):
    if week <= 8 or week >= 44:
        return 0
    if 18 <= week <= 30:
        return 2
    return 4


def main(out):
    out.write("load_kw\n")
    for week in range(1, 53):
        base = season_column(week)
        for day in range(7):
            col = base + (1 if day >= 5 else 0)
            for hour in range(24):
                kw = PEAK_KW * WEEKLY[week - 1] / 100 * DAILY[day] / 100 * HOURLY[hour][col] / 100
                out.write(f"{kw!r}\n")


if __name__ == "__main__":
    if len(sys.argv) > 1:
        with open(sys.argv[1], "w", newline="\n") as f:
            main(f)
    else:
        main(sys.stdout)

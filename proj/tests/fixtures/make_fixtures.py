#!/usr/bin/env python3
"""Regenerate the synthetic CSV fixtures. Deterministic; run from this dir."""
import csv
import math
import random

rng = random.Random(20200106)

START = (2020, 1, 2)
END = (2020, 3, 10)


def daterange(start, end):
    import datetime
    d = datetime.date(*start)
    stop = datetime.date(*end)
    while d <= stop:
        yield d
        d += datetime.timedelta(days=1)


def iso(d):
    return d.isoformat()


# --- counties: 5x5 grid around (40, -90) ---------------------------------
counties = []
for r in range(5):
    for c in range(5):
        fips = f"10{r:01d}{c:02d}"
        lat = 40.0 - 0.8 + 0.4 * r
        lon = -90.0 - 1.0 + 0.5 * c
        counties.append((fips, f"Grid {r}{c}", "XX", round(lat, 4), round(lon, 4)))

with open("geo.csv", "w", newline="") as f:
    w = csv.writer(f)
    w.writerow(["fips", "name", "state", "lat", "lon"])
    w.writerows(counties)

# --- county cases: staggered logistic growth with noise ------------------
rows = []
cum = {fips: 0 for fips, *_ in counties}
cum_d = {fips: 0 for fips, *_ in counties}
days = list(daterange(START, END))
for i, (fips, *_rest) in enumerate(counties):
    onset = 6 + (i * 3) % 30  # day index when the county starts reporting
    for t, d in enumerate(days):
        if t < onset:
            continue
        growth = 0.16 * (1.0 - cum[fips] / 6000.0)
        new = int(max(0, (cum[fips] + 3) * growth + rng.gauss(0, 2)))
        cum[fips] += new
        if rng.random() < 0.25:
            cum_d[fips] += max(0, int(new * 0.03 + rng.gauss(0, 0.4)))
        rows.append((iso(d), _rest[0], _rest[1], fips, cum[fips], cum_d[fips]))

# one deliberate downward revision (repaired by ingest)
for k, row in enumerate(rows):
    if row[3] == "10203" and row[4] > 50:
        rows[k] = (row[0], row[1], row[2], row[3], row[4] - 12, row[5])
        break

# a couple of fips-less rows ("Unknown" county)
rows.append((iso(days[40]), "Unknown", "XX", "", 17, 1))
rows.append((iso(days[41]), "Unknown", "XX", "", 19, 1))

rows.sort(key=lambda r: (r[0], r[3]))
with open("cases.csv", "w", newline="") as f:
    w = csv.writer(f)
    w.writerow(["date", "county", "state", "fips", "cases", "deaths"])
    w.writerows(rows)

# --- prices: weekdays, random walk with a late-Feb slump ------------------
with open("prices.csv", "w", newline="") as f:
    w = csv.writer(f)
    w.writerow(["date", "close"])
    price = 3230.0
    import datetime
    d = datetime.date(2019, 12, 2)
    while d <= datetime.date(*END):
        if d.weekday() < 5:
            drift = -0.004 if d >= datetime.date(2020, 2, 20) else 0.0004
            price *= math.exp(drift + rng.gauss(0, 0.008))
            w.writerow([iso(d), f"{price:.2f}"])
        d += datetime.timedelta(days=1)

# --- search trends: 8 queries, 0..100 -------------------------------------
queries = [
    "Coronavirus US", "Covid-19 US", "Covid 19 US", "Covid - 19 US",
    "Coronavirus World", "Covid-19 World", "Covid 19 World", "Covid - 19 World",
]
with open("trends.csv", "w", newline="") as f:
    w = csv.writer(f)
    w.writerow(["date", "query", "value"])
    for qi, q in enumerate(queries):
        for t, d in enumerate(days):
            base = 50.0 / (1.0 + math.exp(-(t - 35 - 2 * qi) / 6.0))
            v = max(0.0, min(100.0, base + 8.0 * math.sin(t / 5.0 + qi) + rng.gauss(0, 4)))
            w.writerow([iso(d), q, f"{v:.1f}"])

# --- world counts: cumulative ---------------------------------------------
with open("world.csv", "w", newline="") as f:
    w = csv.writer(f)
    w.writerow(["date", "cases", "deaths"])
    wc, wd = 500, 17
    for t, d in enumerate(days):
        wc += int(wc * 0.06 * (1 - wc / 3.0e6) + rng.gauss(0, 30)) + 5
        wd += max(0, int(wc * 0.0015 * 0.05 + rng.gauss(0, 3)))
        w.writerow([iso(d), wc, wd])

print("fixtures written")

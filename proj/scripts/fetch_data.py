#!/usr/bin/env python3
"""Fetch the real-world count datasets used by the acceptance suite.

The datasets are not vendored with the repository; this script downloads or
converts them into `data/<name>.csv` in the `x,count` frequency format the
`tailmix` CLI ingests.

Usage:
  python3 scripts/fetch_data.py moby_dick          # direct HTTP fetch
  python3 scripts/fetch_data.py --r-script         # print an R export script
  python3 scripts/fetch_data.py convert RAW OUT    # tabulate a raw counts file
  python3 scripts/fetch_data.py --all

`moby_dick` (word frequencies in Moby Dick, 18855 values) is hosted as a
plain counts file and is fetched directly. The remaining datasets ship as
R-package data:

  native_americans, us_americans  poweRlaw::native_american / us_american
                                  (casualty counts per conflict)
  swiss_prot                      poweRlaw::swiss_prot (word counts)
  moby_dick (alternative)         poweRlaw::moby
  cs_conference                   citation counts of a computer science
                                  conference (see the crandep package docs)
  cran_dependencies               crandep::cran_dependencies (in-degrees of
                                  the CRAN Depends/Imports network)

Run `--r-script` to print a ready-to-run R snippet that writes these files
(requires R with the poweRlaw and crandep packages), or run it directly with
`Rscript` if available on PATH.
"""

import argparse
import collections
import shutil
import subprocess
import sys
import tempfile
import urllib.request
from pathlib import Path

DATA_DIR = Path(__file__).resolve().parent.parent / "data"

MOBY_URLS = [
    # Newman's word-frequency data for Moby Dick (one count per line)
    "https://raw.githubusercontent.com/jeffalstott/powerlaw/master/testing/words.txt",
    "https://tuvalu.santafe.edu/~aaronc/powerlaws/data/words.txt",
]

R_EXPORT = r"""# Writes the acceptance datasets as x,count CSV files into data/.
# Requires: install.packages(c("poweRlaw", "crandep"))
library(poweRlaw)
library(crandep)

write_freq <- function(values, path) {
  tab <- table(values)
  df <- data.frame(x = as.integer(names(tab)), count = as.integer(tab))
  names(df) <- c("x", "count")
  write.csv(df, path, row.names = FALSE, quote = FALSE)
}

dir.create("data", showWarnings = FALSE)
data("moby");            write_freq(moby, "data/moby_dick.csv")
data("native_american"); write_freq(native_american$Cas, "data/native_americans.csv")
data("us_american");     write_freq(us_american$Cas, "data/us_americans.csv")
data("swiss_prot");      write_freq(swiss_prot$frequency, "data/swiss_prot.csv")
data("cs_dept_conf");    # citation counts, if present in your crandep version
data("cran_dependencies")
g <- df_to_graph(cran_dependencies[cran_dependencies$type %in% c("depends", "imports"), ])
write_freq(igraph::degree(g$graph, mode = "in"), "data/cran_dependencies.csv")
"""


def tabulate(values):
    counts = collections.Counter(values)
    return sorted(counts.items())


def write_freq_csv(pairs, out_path: Path):
    out_path.parent.mkdir(parents=True, exist_ok=True)
    with open(out_path, "w", encoding="utf-8") as out:
        out.write("x,count\n")
        for value, count in pairs:
            out.write(f"{value},{count}\n")
    total = sum(c for _, c in pairs)
    print(f"wrote {out_path} ({total} observations, {len(pairs)} unique values)")


def read_raw(stream):
    values = []
    for line_no, line in enumerate(stream, start=1):
        line = line.strip()
        if not line:
            continue
        try:
            values.append(int(line))
        except ValueError as err:
            raise SystemExit(f"line {line_no}: expected an integer, got {line!r}") from err
    if not values:
        raise SystemExit("no values in input")
    return values


def fetch_moby():
    last_error = None
    for url in MOBY_URLS:
        try:
            print(f"fetching {url} ...")
            with urllib.request.urlopen(url, timeout=60) as response:
                text = response.read().decode("utf-8")
            values = read_raw(text.splitlines())
            write_freq_csv(tabulate(values), DATA_DIR / "moby_dick.csv")
            return
        except Exception as err:  # noqa: BLE001 - try the next mirror
            last_error = err
            print(f"  failed: {err}")
    raise SystemExit(f"all mirrors failed; last error: {last_error}")


def run_r_script():
    rscript = shutil.which("Rscript")
    if rscript is None:
        print("Rscript not found on PATH; run this snippet in R instead:\n")
        print(R_EXPORT)
        return
    with tempfile.NamedTemporaryFile("w", suffix=".R", delete=False) as tmp:
        tmp.write(R_EXPORT)
        path = tmp.name
    subprocess.run([rscript, path], check=True)


def main():
    parser = argparse.ArgumentParser(description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("target", nargs="*", default=[],
                        help="datasets to fetch (moby_dick) or 'convert RAW OUT'")
    parser.add_argument("--all", action="store_true",
                        help="fetch everything fetchable over HTTP and print "
                             "the R export instructions for the rest")
    parser.add_argument("--r-script", action="store_true",
                        help="print (or run via Rscript) the R export snippet")
    args = parser.parse_args()

    if args.r_script:
        run_r_script()
        return

    targets = list(args.target)
    if args.all:
        fetch_moby()
        print("\nremaining datasets come from R packages:")
        print(R_EXPORT)
        return

    if not targets:
        parser.print_help()
        return

    if targets[0] == "convert":
        if len(targets) != 3:
            raise SystemExit("usage: fetch_data.py convert <raw-file|-> <out.csv>")
        source = sys.stdin if targets[1] == "-" else open(targets[1], encoding="utf-8")
        with source:
            values = read_raw(source)
        write_freq_csv(tabulate(values), Path(targets[2]))
        return

    for target in targets:
        if target == "moby_dick":
            fetch_moby()
        else:
            print(f"{target}: ships as R-package data; use --r-script")


if __name__ == "__main__":
    main()

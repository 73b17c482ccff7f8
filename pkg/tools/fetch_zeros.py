#!/usr/bin/env python3
"""Obtain a table of imaginary parts of nontrivial zeta zeros.

Two sources are supported:

``download``
    Fetch Odlyzko's public table of the first 100,000 zeros and check its
    SHA-256 digest before writing it out.  The digest must be supplied with
    ``--sha256`` (or the ``HLCESARO_ZEROS_SHA256`` environment variable);
    a mismatch aborts without touching the destination.

``generate``
    Compute the zeros locally with :func:`mpmath.zetazero`.  Slow (roughly
    0.5 s per zero near height 10^4) but needs no network.  Output is
    appended, so an interrupted run resumes where it stopped.  Each block of
    100 zeros runs in a fresh process with a timeout.

The library never calls this script; it only reads the resulting file.
"""
import argparse
import hashlib
import multiprocessing
import os
import sys
import urllib.error
import urllib.request

ODLYZKO_URL = "https://www-users.cse.umn.edu/~odlyzko/zeta_tables/zeros1"


def _count_existing(path):
    if not os.path.exists(path):
        return 0, None
    n = 0
    last = None
    with open(path) as fh:
        for line in fh:
            s = line.strip()
            if s and not s.startswith("#"):
                n += 1
                last = s
    return n, last


def _block(start, stop, dps, decimals, conn):
    import mpmath

    mpmath.mp.dps = dps
    out = []
    for n in range(start, stop):
        g = mpmath.zetazero(n).imag
        out.append(mpmath.nstr(g, decimals + 6, min_fixed=-1, max_fixed=30,
                               strip_zeros=False)[: decimals + 6])
    conn.send(out)
    conn.close()


def _run_block(start, stop, dps, decimals, timeout):
    # zetazero occasionally stalls after many calls in one process (state
    # builds up in mpmath's caches); a fresh process per block avoids it
    ctx = multiprocessing.get_context("spawn")
    for attempt in range(3):
        recv, send = ctx.Pipe(duplex=False)
        proc = ctx.Process(target=_block, args=(start, stop, dps, decimals, send))
        proc.start()
        send.close()
        if recv.poll(timeout):
            lines = recv.recv()
            proc.join()
            return lines
        proc.terminate()
        proc.join()
        print(f"zeros {start}..{stop - 1}: no result after {timeout}s, retrying", file=sys.stderr)
    raise RuntimeError(f"could not compute zeros {start}..{stop - 1}")


def generate(dest, count, dps=20, decimals=12, block=100, timeout=900):
    import mpmath

    have, _ = _count_existing(dest)
    if have >= count:
        print(f"{dest}: already holds {have} zeros")
        return 0
    mode = "a" if have else "w"
    with open(dest, mode) as fh:
        if not have:
            fh.write("# imaginary parts of the first nontrivial zeros of zeta(s)\n")
            fh.write(f"# generated with mpmath {mpmath.__version__} zetazero, dps={dps}\n")
        n = have + 1
        while n <= count:
            stop = min(n + block, count + 1)
            fh.write("".join(line + "\n" for line in _run_block(n, stop, dps, decimals, timeout)))
            fh.flush()
            print(f"{stop - 1}/{count}", file=sys.stderr, flush=True)
            n = stop
    return 0


def download(dest, sha256, url=ODLYZKO_URL, timeout=60):
    try:
        with urllib.request.urlopen(url, timeout=timeout) as resp:
            payload = resp.read()
    except (urllib.error.URLError, OSError) as exc:
        print(f"error: could not download {url}: {exc}", file=sys.stderr)
        return 4
    digest = hashlib.sha256(payload).hexdigest()
    if sha256 is None:
        print(f"error: no expected digest given; downloaded file has sha256 {digest}",
              file=sys.stderr)
        return 5
    if digest != sha256.lower():
        print(f"error: digest mismatch: expected {sha256}, got {digest}", file=sys.stderr)
        return 5
    lines = payload.decode("ascii").split()
    if len(lines) < 10_000:
        print(f"error: only {len(lines)} values in download", file=sys.stderr)
        return 5
    with open(dest, "w") as fh:
        fh.write(f"# source: {url}\n# sha256: {digest}\n")
        fh.write("\n".join(lines) + "\n")
    print(f"wrote {len(lines)} zeros to {dest}")
    return 0


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="cmd", required=True)
    g = sub.add_parser("generate", help="compute zeros locally with mpmath")
    g.add_argument("dest")
    g.add_argument("--count", type=int, default=10_000)
    g.add_argument("--dps", type=int, default=20)
    d = sub.add_parser("download", help="download Odlyzko's table and verify its digest")
    d.add_argument("dest")
    d.add_argument("--sha256", default=os.environ.get("HLCESARO_ZEROS_SHA256"))
    d.add_argument("--url", default=ODLYZKO_URL)
    args = p.parse_args(argv)
    if args.cmd == "generate":
        return generate(args.dest, args.count, args.dps)
    return download(args.dest, args.sha256, args.url)


if __name__ == "__main__":
    sys.exit(main())

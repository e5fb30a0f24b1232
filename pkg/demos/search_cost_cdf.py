"""How many candidate designs does the alternating search actually touch?

Runs the alternating ordering search over many channel realizations at two
SNR points and prints the empirical CDF of the tested-design count, next to
the closed-form count for each terminating iteration. The brute-force
baseline always tests 216; the alternating search stays far below it.
"""

import os

import iaorder as ia

REALIZATIONS = 150


def main():
    os.environ.setdefault("IAORDER_THREADS", "2")
    cfg = ia.SystemConfig(3, (3, 3, 3), 1, (7, 7, 7), (5, 5, 5))
    spec = ia.ExperimentSpec(
        config=cfg,
        snr_db=(0.0, 50.0),
        realizations=REALIZATIONS,
        base_seed=99,
        criterion="max-sum",
        algorithms=("alternating",),
    )
    print(f"running {REALIZATIONS} realizations at {list(spec.snr_db)} dB ...")
    result = ia.run_cdf(spec)

    for snr in spec.snr_db:
        print(f"\nSNR {snr:g} dB:")
        print(f"{'tested':>8} {'count':>7} {'cum fraction':>13}")
        for row in result.rows:
            if row.snr_db == snr:
                print(f"{row.tested_designs:8d} {row.count:7d} {row.cum_fraction:13.3f}")

    # every tested value matches the closed-form count at its termination point
    checked = sum(
        rec.tested == ia.tested_count(rec.lambda_term, rec.j_term, cfg.K)
        for rec in result.records
        if rec.converged
    )
    print(f"\nclosed-form count verified on {checked}/{len(result.records)} runs")
    print(f"(an iteration over cell j tests K_j! candidates; termination takes "
          f"{cfg.cells} change-free iterations, so counts sit on a 1 + 6*theta grid)")

    result.write_csv("search_cost_cdf.csv")
    print("wrote search_cost_cdf.csv")


if __name__ == "__main__":
    main()

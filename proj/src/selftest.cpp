#include "projlat/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "projlat/geodesics.hpp"
#include "projlat/halmos.hpp"
#include "projlat/symmetry.hpp"

namespace projlat {

namespace {

const double kPi = std::numbers::pi;
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

std::string fmt(double x) { return format_double(x); }

void put(CriterionResult& c, const std::string& key, const std::string& value) {
    c.stats.emplace_back(key, value);
}

AlgebraShape random_shape(Rng& rng, std::size_t max_blocks, std::size_t max_dim) {
    AlgebraShape s;
    const std::size_t nb = 1 + rng.uniform_below(max_blocks);
    for (std::size_t b = 0; b < nb; ++b) s.block_dims.push_back(1 + rng.uniform_below(max_dim));
    return s;
}

Projection coord_projection(const AlgebraShape& shape, const Operator& basis,
                            const std::vector<std::vector<std::size_t>>& coords) {
    Operator op = Operator::zero(shape);
    for (std::size_t b = 0; b < coords.size(); ++b) {
        const std::size_t n = shape.block_dims[b];
        for (std::size_t c : coords[b])
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    op.blocks[b](i, j) += basis.blocks[b](i, c) * std::conj(basis.blocks[b](j, c));
    }
    return projection_unchecked(std::move(op));
}

// ---- criteria 1 & 2: Halmos round trip and the distance oracle ----

void run_halmos_criteria(const SelftestConfig& cfg, CriterionResult& c1, CriterionResult& c2) {
    const std::size_t pairs = cfg.trials ? cfg.trials : 500;
    double max_reconstruct = 0.0, max_pythagoras = 0.0, max_resolution = 0.0, max_distance = 0.0;

    for (std::size_t t = 0; t < pairs; ++t) {
        Rng rng(cfg.seed + t);
        AlgebraShape shape = random_shape(rng, 3, 12);
        TwoProjectionSample s = (t % 2 == 0) ? random_projection_pair_structured(shape, rng)
                                             : random_projection_pair_generic(shape, rng);

        HalmosData h = halmos_decompose(s.p, s.q, cfg.tol);
        auto [p2, q2] = halmos_reconstruct(h, cfg.tol);
        max_reconstruct = std::max({max_reconstruct, distance(p2, s.p), distance(q2, s.q)});
        max_pythagoras = std::max(max_pythagoras, op_norm(h.a * h.a + h.b * h.b - h.e1.op));
        Operator resolution = h.p_and_q.op + h.p_and_qperp.op + h.pperp_and_q.op +
                              h.pperp_and_qperp.op + h.e1.op + h.e2.op;
        max_resolution = std::max(max_resolution,
                                  op_norm(resolution - Operator::identity(shape)));
        max_distance = std::max(max_distance,
                                std::abs(distance_via_halmos(h) - distance(s.p, s.q)));
    }

    c1.id = 1;
    c1.name = "halmos_round_trip";
    put(c1, "pairs", std::to_string(pairs));
    put(c1, "max_reconstruct", fmt(max_reconstruct));
    put(c1, "max_pythagoras", fmt(max_pythagoras));
    put(c1, "max_resolution", fmt(max_resolution));
    c1.pass = max_reconstruct <= 1e-8 && max_pythagoras <= 1e-8 && max_resolution <= 1e-8;

    c2.id = 2;
    c2.name = "distance_formula_oracle";
    put(c2, "pairs", std::to_string(pairs));
    put(c2, "max_deviation", fmt(max_distance));
    c2.pass = max_distance <= 1e-8;
}

// ---- criterion 3: geodesic metric identity ----

CriterionResult run_geodesic_criterion(const SelftestConfig& cfg) {
    CriterionResult c;
    c.id = 3;
    c.name = "geodesic_metric_identity";
    const std::size_t frames = cfg.trials ? cfg.trials : 100;
    const std::size_t theta_pairs = 100;
    double max_dev = 0.0;

    for (std::size_t t = 0; t < frames; ++t) {
        Rng rng(cfg.seed + t);
        AlgebraShape shape;
        shape.block_dims.push_back(2 + rng.uniform_below(9));
        if (t % 2 == 1) shape.block_dims.push_back(1 + rng.uniform_below(8));
        TwoProjectionSample s = random_triangle_pair(shape, rng);
        std::vector<Projection> mids = sample_midpoints(s.p, s.q, 1, rng, cfg.tol);
        GeodesicFrame frame = geodesic_through(s.p, s.q, mids[0], cfg.tol);

        for (std::size_t rep = 0; rep < theta_pairs; ++rep) {
            const double t1 = rng.uniform() * kPi / 2.0;
            const double t2 = rng.uniform() * kPi / 2.0;
            const double d = distance(geodesic_eval(frame, t1, cfg.tol),
                                      geodesic_eval(frame, t2, cfg.tol));
            max_dev = std::max(max_dev, std::abs(d - std::sin(std::abs(t1 - t2))));
        }
    }
    put(c, "frames", std::to_string(frames));
    put(c, "theta_pairs", std::to_string(theta_pairs));
    put(c, "max_deviation", fmt(max_dev));
    c.pass = max_dev <= 1e-8;
    return c;
}

// ---- criterion 4: midpoint bijection ----

CriterionResult run_midpoint_criterion(const SelftestConfig& cfg) {
    CriterionResult c;
    c.id = 4;
    c.name = "midpoint_bijection";
    const std::size_t count = cfg.trials ? cfg.trials : 200;
    double max_round_trip = 0.0, max_distance_dev = 0.0;

    for (std::size_t t = 0; t < count; ++t) {
        Rng rng(cfg.seed + t);
        const std::size_t n = 2 + rng.uniform_below(9);
        const std::size_t k = 1 + rng.uniform_below(n / 2);
        AlgebraShape shape{{n}};
        Operator basis(shape);
        basis.blocks[0] = haar_unitary(n, rng);

        std::vector<std::size_t> pc(k), qc(k);
        for (std::size_t i = 0; i < k; ++i) {
            pc[i] = i;
            qc[i] = k + i;
        }
        Projection p = coord_projection(shape, basis, {pc});
        Projection q = coord_projection(shape, basis, {qc});
        Operator v = partial_isometry_between(p, q, cfg.tol);

        CMatrix up = range_basis(p.op.blocks[0], k);
        Operator u = Operator::zero(shape);
        u.blocks[0] = up * haar_unitary(k, rng) * up.adjoint();

        Projection mid = midpoint_from_unitary(p, q, v, u, cfg.tol);
        max_distance_dev = std::max({max_distance_dev,
                                     std::abs(distance(mid, p) - kInvSqrt2),
                                     std::abs(distance(mid, q) - kInvSqrt2)});
        Operator u2 = unitary_from_midpoint(p, q, v, mid, cfg.tol);
        max_round_trip = std::max(max_round_trip, op_norm(u2 - u));
    }
    put(c, "unitaries", std::to_string(count));
    put(c, "max_round_trip", fmt(max_round_trip));
    put(c, "max_distance_dev", fmt(max_distance_dev));
    c.pass = max_round_trip <= 1e-9 && max_distance_dev <= 1e-8;
    return c;
}

// ---- criterion 5: triangle characterization in factors + two paths ----

CriterionResult run_triangle_criterion(const SelftestConfig& cfg) {
    CriterionResult c;
    c.id = 5;
    c.name = "triangle_characterization";
    const std::size_t pairs = cfg.trials ? cfg.trials : 200;
    std::size_t mismatches = 0;

    for (std::size_t t = 0; t < pairs; ++t) {
        Rng rng(cfg.seed + t);
        const std::size_t n = 2 + rng.uniform_below(7);
        AlgebraShape shape{{n}};
        Projection p, q;
        switch (t % 3) {
            case 0: {  // orthogonal pair
                TwoProjectionSample s = random_triangle_pair(shape, rng);
                p = s.p;
                q = s.q;
                break;
            }
            case 1: {  // complement-orthogonal pair
                TwoProjectionSample s = random_triangle_pair(shape, rng);
                p = complement(s.p);
                q = complement(s.q);
                break;
            }
            default: {  // generic independent pair
                TwoProjectionSample s = random_projection_pair_generic(shape, rng);
                p = s.p;
                q = s.q;
                break;
            }
        }
        const bool orth = op_norm(p.op * q.op) <= cfg.tol.eq_abs;
        const bool coorth =
            op_norm((Operator::identity(shape) - p.op) * (Operator::identity(shape) - q.op)) <=
            cfg.tol.eq_abs;
        const bool witness = triangle_relation(p, q, cfg.tol).has_value();
        if (witness != (orth || coorth)) ++mismatches;
    }

    // two unit-speed paths through the same midpoint, separated at pi/8
    const std::size_t witnesses = std::max<std::size_t>(1, pairs / 10);
    double min_separation = 1e300;
    for (std::size_t t = 0; t < witnesses; ++t) {
        Rng rng(cfg.seed + t);
        const std::size_t n = 4 + rng.uniform_below(5);
        AlgebraShape shape{{n}};
        Operator basis(shape);
        basis.blocks[0] = haar_unitary(n, rng);
        Projection p = coord_projection(shape, basis, {{0, 1}});
        Projection q = coord_projection(shape, basis, {{1, 2}});
        Projection p1 = coord_projection(shape, basis, {{1}});
        Projection q1 = coord_projection(shape, basis, {{3}});
        auto [f1, f2] = nonuniqueness_witness(p, q, p1, q1, cfg.tol);
        min_separation = std::min(min_separation,
                                  distance(geodesic_eval(f1, kPi / 8.0, cfg.tol),
                                           geodesic_eval(f2, kPi / 8.0, cfg.tol)));
    }

    put(c, "pairs", std::to_string(pairs));
    put(c, "mismatches", std::to_string(mismatches));
    put(c, "witness_pairs", std::to_string(witnesses));
    put(c, "min_separation", fmt(min_separation));
    c.pass = mismatches == 0 && min_separation > 1e-3;
    return c;
}

// ---- criterion 6: normal-form round trip ----

CriterionResult run_factorize_criterion(const SelftestConfig& cfg) {
    CriterionResult c;
    c.id = 6;
    c.name = "normal_form_round_trip";
    const std::size_t count = cfg.trials ? cfg.trials : 50;
    const std::size_t verify_trials = 200;
    double max_residual = 0.0;
    std::size_t failures = 0;

    for (std::size_t t = 0; t < count; ++t) {
        Rng rng(cfg.seed + t);
        // shapes up to (8,6,4); equal dimensions now and then so block
        // permutations actually occur
        AlgebraShape shape;
        const std::size_t nb = 1 + rng.uniform_below(3);
        const std::size_t dims[3] = {8, 6, 4};
        for (std::size_t b = 0; b < nb; ++b)
            shape.block_dims.push_back(dims[rng.uniform_below(3)] - rng.uniform_below(3));
        if (t % 4 == 0 && nb >= 2) shape.block_dims[1] = shape.block_dims[0];

        Factorization f = random_factorization(shape, rng);
        GrassmannSignature sig;
        sig.shape = shape;
        sig.k.resize(shape.block_count());
        for (std::size_t b = 0; b < shape.block_count(); ++b)
            sig.k[b] = 1 + rng.uniform_below(shape.block_dims[b] - 1);

        MapOracle oracle = induce_oracle(f, sig);
        try {
            // recovery runs within the default budget; verification gets
            // one extra call per sampled projection
            FactorizeResult res = factorize(oracle, cfg.tol);
            oracle.set_call_budget(oracle.calls_used() + verify_trials);
            VerifyReport rep =
                verify_factorization(oracle, res.factorization, verify_trials, cfg.seed + t, cfg.tol);
            max_residual = std::max(max_residual, rep.max_residual);
            if (!rep.pass) ++failures;
        } catch (const Error&) {
            ++failures;
        }
    }
    put(c, "factorizations", std::to_string(count));
    put(c, "verify_trials", std::to_string(verify_trials));
    put(c, "failures", std::to_string(failures));
    put(c, "max_residual", fmt(max_residual));
    c.pass = failures == 0 && max_residual <= 1e-7;
    return c;
}

// ---- criterion 7: extension correctness ----

CriterionResult run_extension_criterion(const SelftestConfig& cfg) {
    CriterionResult c;
    c.id = 7;
    c.name = "lattice_extension";
    const std::size_t oracles = cfg.trials ? cfg.trials : 20;
    const std::size_t t2_probes = 100;
    const std::size_t ortho_pairs = 100;
    const std::size_t t1_probes = 100;
    double max_t2 = 0.0, max_ortho = 0.0, max_t1 = 0.0;

    for (std::size_t t = 0; t < oracles; ++t) {
        Rng rng(cfg.seed + t);
        AlgebraShape shape;
        const std::size_t nb = 1 + rng.uniform_below(2);
        for (std::size_t b = 0; b < nb; ++b) shape.block_dims.push_back(3 + rng.uniform_below(4));

        Factorization f = random_factorization(shape, rng);
        // signatures keep k < n/2 so chunk choices stay independent and
        // the complement flag is always decidable from ranks
        GrassmannSignature sig;
        sig.shape = shape;
        sig.k.resize(shape.block_count());
        for (std::size_t b = 0; b < shape.block_count(); ++b) {
            const std::size_t hi = (shape.block_dims[b] - 1) / 2;  // largest k with 2k < n
            sig.k[b] = 1 + rng.uniform_below(hi);
        }

        MapOracle oracle = induce_oracle(f, sig);
        oracle.set_call_budget(std::size_t{1} << 24);
        const Factorization jpart = jordan_part(factorize(oracle, cfg.tol).factorization);

        const std::size_t per_t2 = (t2_probes + oracles - 1) / oracles;
        for (std::size_t rep = 0; rep < per_t2; ++rep) {
            Projection p = random_projection(random_signature(shape, rng), rng);
            Projection ext = t2_eval(oracle, p, cfg.tol);
            max_t2 = std::max(max_t2, op_norm(ext.op - apply_factorization(jpart, p).op));
        }

        const std::size_t per_ortho = (ortho_pairs + oracles - 1) / oracles;
        for (std::size_t rep = 0; rep < per_ortho; ++rep) {
            Operator basis = haar_block_unitary(shape, rng);
            std::vector<std::vector<std::size_t>> ca(shape.block_count()), cb(shape.block_count());
            for (std::size_t b = 0; b < shape.block_count(); ++b) {
                const std::size_t n = shape.block_dims[b];
                const std::size_t split = 1 + rng.uniform_below(n - 1);
                for (std::size_t i = 0; i < split; ++i) ca[b].push_back(i);
                for (std::size_t i = split; i < n; ++i) cb[b].push_back(i);
            }
            Projection a = coord_projection(shape, basis, ca);
            Projection b = coord_projection(shape, basis, cb);
            max_ortho = std::max(max_ortho,
                                 op_norm(t2_eval(oracle, a, cfg.tol).op *
                                         t2_eval(oracle, b, cfg.tol).op));
        }

        NormalizedOracle norm = normalize_oracle(oracle, cfg.tol);
        const std::size_t per_t1 = (t1_probes + oracles - 1) / oracles;
        for (std::size_t rep = 0; rep < per_t1; ++rep) {
            Operator basis = haar_block_unitary(shape, rng);
            // commuting members p3, p4 overlapping in `ov` coordinates per
            // block, with room for f outside p3 v p4
            std::vector<std::vector<std::size_t>> c3(shape.block_count()), c4(shape.block_count()),
                ce(shape.block_count()), cf(shape.block_count());
            for (std::size_t b = 0; b < shape.block_count(); ++b) {
                const std::size_t k = norm.oracle.source_sig().k[b];
                const std::size_t ov = std::max<std::size_t>(1, k / 2);
                for (std::size_t i = 0; i < k; ++i) c3[b].push_back(i);
                for (std::size_t i = 0; i < k; ++i) c4[b].push_back(k - ov + i);
                for (std::size_t i = 0; i < ov; ++i) {
                    ce[b].push_back(k - ov + i);
                    cf[b].push_back(2 * k - ov + i);  // 2k <= n-? guaranteed by k < n/2 and ov <= k
                }
            }
            Projection p3 = coord_projection(shape, basis, c3);
            Projection p4 = coord_projection(shape, basis, c4);
            Projection e = coord_projection(shape, basis, ce);
            Projection fpick = coord_projection(shape, basis, cf);

            Projection t1 = t1_eval(norm.oracle, e, p3, fpick, cfg.tol);
            Operator product = norm.oracle.query(p3).op * norm.oracle.query(p4).op;
            max_t1 = std::max(max_t1, op_norm(t1.op - product));
        }
    }

    put(c, "oracles", std::to_string(oracles));
    put(c, "max_t2_residual", fmt(max_t2));
    put(c, "max_orthogonality", fmt(max_ortho));
    put(c, "max_t1_residual", fmt(max_t1));
    c.pass = max_t2 <= 1e-7 && max_ortho <= cfg.tol.eq_abs && max_t1 <= 1e-7;
    return c;
}

// ---- criterion 8: Example 1 rank bookkeeping on M_N ----

CriterionResult run_duality_criterion(const SelftestConfig& cfg) {
    CriterionResult c;
    c.id = 8;
    c.name = "example1_rank_bookkeeping";
    const std::size_t reps = cfg.trials ? std::max<std::size_t>(1, cfg.trials / 25) : 2;
    std::size_t checks = 0, failures = 0;

    for (std::size_t n = 3; n <= 8; ++n) {
        for (std::size_t rep = 0; rep < reps; ++rep) {
            Rng rng(cfg.seed + n * 131 + rep);
            AlgebraShape shape{{n}};
            Factorization f = random_factorization(shape, rng);
            const bool planted = f.r.mask[0];
            for (std::size_t k = 1; k < n; ++k) {
                if (2 * k == n) continue;  // canonicalized; no rank information
                MapOracle o1 = induce_oracle(f, GrassmannSignature{shape, {k}});
                MapOracle o2 = induce_oracle(f, GrassmannSignature{shape, {n - k}});
                ++checks;
                try {
                    FactorizeResult r1 = factorize(o1, cfg.tol);
                    FactorizeResult r2 = factorize(o2, cfg.tol);
                    const bool flags_paired = r1.factorization.r.mask[0] == planted &&
                                              r2.factorization.r.mask[0] == planted;
                    const bool ranks_paired =
                        !planted ? (o1.target_sig().k[0] == n - k && o2.target_sig().k[0] == k)
                                 : (o1.target_sig().k[0] == k && o2.target_sig().k[0] == n - k);
                    if (!flags_paired || !ranks_paired) ++failures;
                } catch (const Error&) {
                    ++failures;
                }
            }
        }
    }
    put(c, "checks", std::to_string(checks));
    put(c, "failures", std::to_string(failures));
    c.pass = failures == 0;
    return c;
}

}  // namespace

std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6e", x);
    return buf;
}

SelftestReport run_selftest(const SelftestConfig& cfg) {
    cfg.tol.validate();
    SelftestReport report;
    report.criteria.resize(2);
    run_halmos_criteria(cfg, report.criteria[0], report.criteria[1]);
    report.criteria.push_back(run_geodesic_criterion(cfg));
    report.criteria.push_back(run_midpoint_criterion(cfg));
    report.criteria.push_back(run_triangle_criterion(cfg));
    report.criteria.push_back(run_factorize_criterion(cfg));
    report.criteria.push_back(run_extension_criterion(cfg));
    report.criteria.push_back(run_duality_criterion(cfg));

    report.all_pass = true;
    for (const CriterionResult& c : report.criteria) report.all_pass = report.all_pass && c.pass;
    return report;
}

void print_report(std::ostream& os, const SelftestReport& report) {
    for (const CriterionResult& c : report.criteria) {
        os << "criterion=" << c.id << " name=" << c.name;
        for (const auto& [k, v] : c.stats) os << ' ' << k << '=' << v;
        os << " pass=" << (c.pass ? 1 : 0) << '\n';
    }
    os << (report.all_pass ? "PASS" : "FAIL") << '\n';
}

}  // namespace projlat

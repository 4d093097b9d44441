//
// projlat - numerics for the metric geometry of projection lattices:
// two-projection canonical forms, geodesics and midpoints, the triangle
// and sharp relations, and normal forms of Grassmann-space isometries.
//

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "projlat/geodesics.hpp"
#include "projlat/halmos.hpp"
#include "projlat/json_io.hpp"
#include "projlat/selftest.hpp"
#include "projlat/symmetry.hpp"

using namespace projlat;
using nlohmann::json;

namespace {

Tolerance tolerance_from_env() {
    Tolerance tol;
    if (const char* eq = std::getenv("PROJLAT_TOL_EQ")) tol.eq_abs = std::atof(eq);
    if (const char* rk = std::getenv("PROJLAT_TOL_RANK")) tol.rank_rel = std::atof(rk);
    tol.validate();
    return tol;
}

std::vector<std::size_t> parse_csv_sizes(const std::string& s) {
    std::vector<std::size_t> out;
    std::size_t pos = 0;
    while (pos < s.size()) {
        std::size_t next = s.find(',', pos);
        if (next == std::string::npos) next = s.size();
        out.push_back(static_cast<std::size_t>(std::stoull(s.substr(pos, next - pos))));
        pos = next + 1;
    }
    if (out.empty()) throw_invalid("empty list; expected e.g. \"2,3\"");
    return out;
}

// Built-in oracle spec: "shape=2,3;ranks=1,1;seed=7". The hidden normal
// form is drawn from the seed; useful for self-contained demos.
MapOracle make_builtin_oracle(const std::string& spec, const Tolerance&) {
    std::optional<AlgebraShape> shape;
    std::optional<std::vector<std::size_t>> ranks;
    std::uint64_t seed = 0;

    std::size_t pos = 0;
    while (pos < spec.size()) {
        std::size_t next = spec.find(';', pos);
        if (next == std::string::npos) next = spec.size();
        const std::string field = spec.substr(pos, next - pos);
        pos = next + 1;
        const std::size_t eq = field.find('=');
        if (eq == std::string::npos) throw_invalid("builtin spec: expected key=value in " + field);
        const std::string key = field.substr(0, eq);
        const std::string value = field.substr(eq + 1);
        if (key == "shape")
            shape = AlgebraShape{parse_csv_sizes(value)};
        else if (key == "ranks")
            ranks = parse_csv_sizes(value);
        else if (key == "seed")
            seed = std::stoull(value);
        else
            throw_invalid("builtin spec: unknown key " + key);
    }
    if (!shape || !ranks) throw_invalid("builtin spec needs shape=, ranks= (and optionally seed=)");

    Rng rng(seed);
    Factorization f = random_factorization(*shape, rng);
    GrassmannSignature sig{*shape, *ranks};
    sig.validate();
    return induce_oracle(f, sig);
}

MapOracle open_oracle(const std::string& oracle_dir, const std::string& builtin,
                      const Tolerance& tol) {
    if (!oracle_dir.empty() && !builtin.empty())
        throw_invalid("use either --oracle-dir or --builtin, not both");
    if (!oracle_dir.empty()) return file_oracle(oracle_dir, tol);
    if (!builtin.empty()) return make_builtin_oracle(builtin, tol);
    throw_invalid("an oracle is required: --oracle-dir <dir> or --builtin <spec>");
}

void emit_json(const json& j, const std::string& out_path) {
    if (out_path.empty())
        std::cout << j.dump(2) << '\n';
    else
        save_json_file(out_path, j);
}

std::string ranks_csv(const std::vector<std::size_t>& ranks) {
    std::string s;
    for (std::size_t i = 0; i < ranks.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(ranks[i]);
    }
    return s;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"projlat: metric geometry of projection lattices"};
    app.require_subcommand(1);

    Tolerance tol;
    try {
        tol = tolerance_from_env();
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.exit_code();
    }

    // halmos
    auto* cmd_halmos = app.add_subcommand("halmos", "two-projection canonical decomposition");
    std::string hal_p, hal_q, hal_out;
    cmd_halmos->add_option("p", hal_p, "projection JSON file")->required();
    cmd_halmos->add_option("q", hal_q, "projection JSON file")->required();
    cmd_halmos->add_option("--out", hal_out, "write full HalmosData JSON here");

    // geodesic
    auto* cmd_geo = app.add_subcommand("geodesic", "evaluate the unique path through a midpoint");
    std::string geo_p, geo_q, geo_p0, geo_out;
    double geo_theta = 0.0;
    cmd_geo->add_option("p", geo_p)->required();
    cmd_geo->add_option("q", geo_q)->required();
    cmd_geo->add_option("p0", geo_p0, "midpoint of p and q")->required();
    cmd_geo->add_option("--theta", geo_theta, "parameter in [0, pi/2]")->required();
    cmd_geo->add_option("--out", geo_out);

    // midpoint
    auto* cmd_mid = app.add_subcommand("midpoint", "midpoints of an orthogonal pair");
    std::string mid_p, mid_q, mid_unitary, mid_out;
    std::size_t mid_sample = 0;
    std::uint64_t mid_seed = 0;
    cmd_mid->add_option("p", mid_p)->required();
    cmd_mid->add_option("q", mid_q)->required();
    cmd_mid->add_option("--unitary", mid_unitary, "corner unitary JSON (operator format)");
    cmd_mid->add_option("--sample", mid_sample, "number of Haar-sampled midpoints");
    cmd_mid->add_option("--seed", mid_seed, "seed for --sample");
    cmd_mid->add_option("--out", mid_out);

    // triangle
    auto* cmd_tri = app.add_subcommand("triangle", "central witness for the triangle relation");
    std::string tri_p, tri_q;
    cmd_tri->add_option("p", tri_p)->required();
    cmd_tri->add_option("q", tri_q)->required();

    // sharp
    auto* cmd_sharp = app.add_subcommand("sharp", "p1 _|_ p2 and p1 subequivalent to 1-p1-p2");
    std::string sharp_p, sharp_q;
    cmd_sharp->add_option("p1", sharp_p)->required();
    cmd_sharp->add_option("p2", sharp_q)->required();

    // enclose
    auto* cmd_enc = app.add_subcommand("enclose", "endpoints e, f with p1, p2 in m(e, f)");
    std::string enc_p, enc_q, enc_out;
    cmd_enc->add_option("p1", enc_p)->required();
    cmd_enc->add_option("p2", enc_q)->required();
    cmd_enc->add_option("--out", enc_out);

    // factorize
    auto* cmd_fac = app.add_subcommand("factorize", "recover the normal form of an oracle");
    std::string fac_dir, fac_builtin, fac_out;
    cmd_fac->add_option("--oracle-dir", fac_dir, "directory of *.in.json/*.out.json probes");
    cmd_fac->add_option("--builtin", fac_builtin, "e.g. shape=2,3;ranks=1,1;seed=7");
    cmd_fac->add_option("--out", fac_out, "write the factorization JSON here");

    // verify
    auto* cmd_ver = app.add_subcommand("verify", "verify a factorization against an oracle");
    std::string ver_fac, ver_dir, ver_builtin;
    std::size_t ver_trials = 100;
    std::uint64_t ver_seed = 7;
    cmd_ver->add_option("factorization", ver_fac, "factorization JSON file")->required();
    cmd_ver->add_option("--oracle-dir", ver_dir);
    cmd_ver->add_option("--builtin", ver_builtin);
    cmd_ver->add_option("--trials", ver_trials);
    cmd_ver->add_option("--seed", ver_seed);

    // extend
    auto* cmd_ext = app.add_subcommand("extend", "orthoisomorphism extension at a projection");
    std::string ext_e, ext_dir, ext_builtin, ext_out;
    cmd_ext->add_option("e", ext_e, "projection JSON file (any lattice element)")->required();
    cmd_ext->add_option("--oracle-dir", ext_dir);
    cmd_ext->add_option("--builtin", ext_builtin);
    cmd_ext->add_option("--out", ext_out);

    // gen
    auto* cmd_gen = app.add_subcommand("gen", "seeded Haar-random projection");
    std::string gen_shape, gen_ranks, gen_out;
    std::uint64_t gen_seed = 0;
    cmd_gen->add_option("--shape", gen_shape, "block dimensions, e.g. 2,3")->required();
    cmd_gen->add_option("--ranks", gen_ranks, "blockwise ranks, e.g. 1,1")->required();
    cmd_gen->add_option("--seed", gen_seed);
    cmd_gen->add_option("--out", gen_out);

    // selftest
    auto* cmd_self = app.add_subcommand("selftest", "run the full property suite");
    std::size_t self_trials = 0;
    std::uint64_t self_seed = 7;
    cmd_self->add_option("--trials", self_trials, "override per-criterion trial counts");
    cmd_self->add_option("--seed", self_seed);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*cmd_halmos) {
            Projection p = projection_from_json(load_json_file(hal_p), tol);
            Projection q = projection_from_json(load_json_file(hal_q), tol);
            HalmosData h = halmos_decompose(p, q, tol);
            std::printf("p_and_q_ranks=%s\n", ranks_csv(h.p_and_q.ranks).c_str());
            std::printf("p_and_qperp_ranks=%s\n", ranks_csv(h.p_and_qperp.ranks).c_str());
            std::printf("pperp_and_q_ranks=%s\n", ranks_csv(h.pperp_and_q.ranks).c_str());
            std::printf("pperp_and_qperp_ranks=%s\n", ranks_csv(h.pperp_and_qperp.ranks).c_str());
            std::printf("e1_ranks=%s\n", ranks_csv(h.e1.ranks).c_str());
            std::string angles = "[";
            for (std::size_t i = 0; i < h.angles.size(); ++i) {
                if (i) angles += ',';
                char buf[32];
                std::snprintf(buf, sizeof(buf), "%.9f", h.angles[i]);
                angles += buf;
            }
            angles += ']';
            std::printf("angles=%s\n", angles.c_str());
            std::printf("distance=%.9f\n", distance_via_halmos(h));
            if (!hal_out.empty()) save_json_file(hal_out, halmos_to_json(h));
        } else if (*cmd_geo) {
            Projection p = projection_from_json(load_json_file(geo_p), tol);
            Projection q = projection_from_json(load_json_file(geo_q), tol);
            Projection p0 = projection_from_json(load_json_file(geo_p0), tol);
            GeodesicFrame frame = geodesic_through(p, q, p0, tol);
            emit_json(projection_to_json(geodesic_eval(frame, geo_theta, tol)), geo_out);
        } else if (*cmd_mid) {
            Projection p = projection_from_json(load_json_file(mid_p), tol);
            Projection q = projection_from_json(load_json_file(mid_q), tol);
            if (!mid_unitary.empty() && mid_sample > 0)
                throw_invalid("midpoint: use either --unitary or --sample");
            if (!mid_unitary.empty()) {
                Operator u = operator_from_json(load_json_file(mid_unitary));
                Operator v = partial_isometry_between(p, q, tol);
                emit_json(projection_to_json(midpoint_from_unitary(p, q, v, u, tol)), mid_out);
            } else if (mid_sample > 0) {
                Rng rng(mid_seed);
                json arr = json::array();
                for (const Projection& m : sample_midpoints(p, q, mid_sample, rng, tol))
                    arr.push_back(projection_to_json(m));
                emit_json(arr, mid_out);
            } else {
                throw_invalid("midpoint: one of --unitary or --sample is required");
            }
        } else if (*cmd_tri) {
            Projection p = projection_from_json(load_json_file(tri_p), tol);
            Projection q = projection_from_json(load_json_file(tri_q), tol);
            std::optional<TriangleWitness> w = triangle_relation(p, q, tol);
            if (!w) {
                std::printf("none\n");
            } else {
                std::string bits;
                for (bool b : w->r.mask) bits += b ? '1' : '0';
                std::printf("%s\n", bits.c_str());
            }
        } else if (*cmd_sharp) {
            Projection p1 = projection_from_json(load_json_file(sharp_p), tol);
            Projection p2 = projection_from_json(load_json_file(sharp_q), tol);
            std::printf("%s\n", sharp_relation(p1, p2, tol) ? "true" : "false");
        } else if (*cmd_enc) {
            Projection p1 = projection_from_json(load_json_file(enc_p), tol);
            Projection p2 = projection_from_json(load_json_file(enc_q), tol);
            MidpointEnclosure enc = midpoint_enclosure(p1, p2, tol);
            json j;
            j["e"] = projection_to_json(enc.e);
            j["f"] = projection_to_json(enc.f);
            j["orient"] = std::vector<int>(enc.orient.mask.begin(), enc.orient.mask.end());
            emit_json(j, enc_out);
        } else if (*cmd_fac) {
            MapOracle oracle = open_oracle(fac_dir, fac_builtin, tol);
            FactorizeResult res = factorize(oracle, tol);
            std::FILE* report = fac_out.empty() ? stderr : stdout;
            std::fprintf(report, "oracle_calls=%zu\n", res.oracle_calls);
            std::fprintf(report, "alternatives=%zu\n", res.alternative_count);
            std::fprintf(report, "max_probe_residual=%s\n",
                         format_double(res.max_probe_residual).c_str());
            emit_json(factorization_to_json(res.factorization), fac_out);
        } else if (*cmd_ver) {
            MapOracle oracle = open_oracle(ver_dir, ver_builtin, tol);
            Factorization f = factorization_from_json(load_json_file(ver_fac), tol);
            oracle.set_call_budget(oracle.calls_used() + ver_trials);
            VerifyReport rep = verify_factorization(oracle, f, ver_trials, ver_seed, tol);
            std::printf("trials=%zu\n", ver_trials);
            std::printf("max_residual=%s\n", format_double(rep.max_residual).c_str());
            std::printf("%s\n", rep.pass ? "PASS" : "FAIL");
            return rep.pass ? 0 : 3;
        } else if (*cmd_ext) {
            MapOracle oracle = open_oracle(ext_dir, ext_builtin, tol);
            oracle.set_call_budget(std::size_t{1} << 24);
            Projection e = projection_from_json(load_json_file(ext_e), tol);
            emit_json(projection_to_json(t2_eval(oracle, e, tol)), ext_out);
        } else if (*cmd_gen) {
            GrassmannSignature sig{AlgebraShape{parse_csv_sizes(gen_shape)},
                                   parse_csv_sizes(gen_ranks)};
            sig.validate();
            emit_json(projection_to_json(random_projection(sig, gen_seed)), gen_out);
        } else if (*cmd_self) {
            SelftestConfig cfg;
            cfg.seed = self_seed;
            cfg.trials = self_trials;
            cfg.tol = tol;
            SelftestReport report = run_selftest(cfg);
            print_report(std::cout, report);
            return report.all_pass ? 0 : 3;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

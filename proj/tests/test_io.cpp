#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <string>

#include "projlat/json_io.hpp"
#include "projlat/sampling.hpp"
#include "test_support.hpp"

using namespace projlat;
using namespace projlat_test;
namespace fs = std::filesystem;

namespace {
const Tolerance kTol{};
}

TEST_CASE("operator JSON round trip is decimal-exact to 1e-15") {
    Rng rng(71);
    for (int trial = 0; trial < 10; ++trial) {
        AlgebraShape shape{{1 + rng.uniform_below(5), 1 + rng.uniform_below(5)}};
        Operator op(shape);
        for (auto& blk : op.blocks) blk = rng.gaussian_matrix(blk.rows(), blk.cols());

        Operator back = operator_from_json(operator_to_json(op));
        for (std::size_t b = 0; b < op.blocks.size(); ++b)
            for (std::size_t i = 0; i < op.blocks[b].rows(); ++i)
                for (std::size_t j = 0; j < op.blocks[b].cols(); ++j) {
                    const cplx x = op.blocks[b](i, j);
                    const cplx y = back.blocks[b](i, j);
                    CHECK(std::abs(x - y) <= 1e-15 * (1.0 + std::abs(x)));
                }
    }
}

TEST_CASE("projected JSON re-parses into a valid projection") {
    Rng rng(72);
    for (int trial = 0; trial < 10; ++trial) {
        AlgebraShape shape{{2 + rng.uniform_below(5)}};
        Projection p = random_projection(random_signature(shape, rng), rng);
        Projection back = projection_from_json(projection_to_json(p), kTol);
        CHECK(distance(back, p) <= 1e-12);
        CHECK(back.ranks == p.ranks);
    }
}

TEST_CASE("factorization JSON round trip") {
    Rng rng(73);
    AlgebraShape shape{{3, 3, 2}};
    Factorization f = random_factorization(shape, rng);
    Factorization back = factorization_from_json(factorization_to_json(f), kTol);
    REQUIRE(back.block_maps.size() == f.block_maps.size());
    for (std::size_t i = 0; i < f.block_maps.size(); ++i) {
        CHECK(back.block_maps[i].target_block == f.block_maps[i].target_block);
        CHECK(back.block_maps[i].antilinear == f.block_maps[i].antilinear);
        CHECK(diff_norm(back.block_maps[i].u, f.block_maps[i].u) <= 1e-12);
    }
    CHECK(back.r.mask == f.r.mask);
}

TEST_CASE("halmos JSON carries the full decomposition") {
    Rng rng(74);
    TwoProjectionSample s = random_projection_pair_structured(AlgebraShape{{6}}, rng);
    HalmosData h = halmos_decompose(s.p, s.q);
    nlohmann::json j = halmos_to_json(h);
    CHECK(j.contains("angles"));
    Operator v = operator_from_json(j["v"]);
    CHECK(op_norm(v - h.v) <= 1e-12);
    Projection e1 = projection_from_json(j["e1"], kTol);
    CHECK(distance(e1, h.e1) <= 1e-12);
}

TEST_CASE("file oracle replays recorded probes") {
    const std::string dir = "io_test_oracle_dir";
    fs::remove_all(dir);
    fs::create_directory(dir);

    Rng rng(75);
    AlgebraShape shape{{4, 3}};
    Factorization f = random_factorization(shape, rng);
    GrassmannSignature sig{shape, {2, 1}};
    MapOracle live = induce_oracle(f, sig);
    live.set_call_budget(100000);

    // record every probe factorize asks for
    std::size_t counter = 0;
    MapOracle recording(live.source_sig(), live.target_sig(),
                        [&](const Projection& p) {
                            Projection out = live.query(p);
                            char name[32];
                            std::snprintf(name, sizeof(name), "%04zu", counter++);
                            save_json_file(dir + "/" + name + ".in.json", projection_to_json(p));
                            save_json_file(dir + "/" + name + ".out.json", projection_to_json(out));
                            return out;
                        });
    recording.set_call_budget(100000);
    FactorizeResult first = factorize(recording);

    // replay: identical queries, identical recovery
    MapOracle replay = file_oracle(dir, kTol);
    replay.set_call_budget(100000);
    FactorizeResult second = factorize(replay);
    for (std::size_t i = 0; i < first.factorization.block_maps.size(); ++i) {
        CHECK(diff_norm(first.factorization.block_maps[i].u,
                        second.factorization.block_maps[i].u) <= 1e-9);
        CHECK(first.factorization.block_maps[i].antilinear ==
              second.factorization.block_maps[i].antilinear);
    }
    CHECK(first.factorization.r.mask == second.factorization.r.mask);

    // a missing probe is an invalid-input error naming the probe
    MapOracle sparse = file_oracle(dir, kTol);
    Projection unseen = random_projection(sig, rng);
    try {
        sparse.query(unseen);
        FAIL("expected a missing-probe error");
    } catch (const Error& e) {
        CHECK(e.kind() == errc::invalid_input);
        CHECK(std::string(e.what()).find("missing probe") != std::string::npos);
    }

    fs::remove_all(dir);
}

#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <hodge/io/commands.hpp>

using namespace hodge;
using namespace hodge::io;

namespace {

const std::filesystem::path data_dir{HODGE_TEST_DATA};

std::string slurp(const std::filesystem::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<std::filesystem::path> files_in(const std::string &sub, const std::string &suffix) {
    std::vector<std::filesystem::path> out;
    for (const auto &e : std::filesystem::directory_iterator(data_dir / sub)) {
        const std::string name = e.path().filename().string();
        if (name.size() >= suffix.size() && name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0) {
            out.push_back(e.path());
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::size_t parse_error_position(const std::string &text) {
    try {
        parse_scalar(text);
    } catch (const parse_error &e) {
        return e.position();
    }
    FAIL("no ParseError for \"" << text << "\"");
    return 0;
}

// Every string leaf of a JSON document that looks like a scalar.
void collect_scalars(const json &j, std::vector<std::string> &out) {
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (!s.empty() && (std::isdigit(static_cast<unsigned char>(s[0])) || s[0] == '-')) out.push_back(s);
    } else if (j.is_structured()) {
        for (const auto &x : j) collect_scalars(x, out);
    }
}

} // namespace

TEST_CASE("scalar grammar accepts rationals, Gaussian parts, tp powers and sums", "[cli]") {
    CHECK(parse_scalar("3") == scalar(3));
    CHECK(parse_scalar("-7/14") == scalar::frac(-1, 2));
    CHECK(parse_scalar("0+1i") == scalar::i());
    CHECK(parse_scalar("1/2-3/4i") == scalar(rational(1, 2), rational(-3, 4)));
    CHECK(parse_scalar("2*tp^-1") == scalar(2) * scalar::tp(-1));
    CHECK(parse_scalar("1*tp^2*tp^-3") == scalar::tp(-1));
    CHECK(parse_scalar("1+2*tp^1") == scalar(1) + scalar(2) * scalar::tp(1));
    CHECK(parse_scalar("1+1i*tp^1+-3*tp^2") ==
          scalar(rational(1), rational(1)) * scalar::tp(1) - scalar(3) * scalar::tp(2));
}

TEST_CASE("formatted scalars parse back to themselves", "[cli]") {
    corpus::rng_t rng(2024);
    for (int t = 0; t < 200; ++t) {
        scalar s;
        const int terms = corpus::uniform(rng, 0, 3);
        for (int k = 0; k < terms; ++k) s += corpus::small_gaussian(rng, 9) * scalar::tp(corpus::uniform(rng, -4, 4));
        const std::string text = format_scalar(s);
        CHECK(parse_scalar(text) == s);
        CHECK(format_scalar(parse_scalar(text)) == text);
    }
}

TEST_CASE("scalar parse errors report the offending position", "[cli]") {
    CHECK(parse_error_position("") == 0);
    CHECK(parse_error_position("x") == 0);
    CHECK(parse_error_position("1/") == 2);
    CHECK(parse_error_position("1/0") == 2);
    CHECK(parse_error_position("1+") == 2);
    CHECK(parse_error_position("1-2") == 2);
    CHECK(parse_error_position("1+2i*tq^1") == 6);
    CHECK(parse_error_position("1*tp^") == 5);
    CHECK(parse_error_position("1*tp^300") == 8);
    CHECK(parse_error_position("1 ") == 1);
    CHECK_THROWS_WITH(parse_scalar("2/x"), Catch::Matchers::StartsWith("ParseError") &&
                                               Catch::Matchers::ContainsSubstring("at position 2: expected a digit"));
}

TEST_CASE("fixtures survive parse, serialize, parse", "[cli]") {
    for (const auto &f : files_in("fixtures", ".json")) {
        if (f.filename() == "malformed.json") continue;
        INFO(f.filename().string());
        const std::string text = slurp(f);
        problem p = parse_problem(text);
        const std::string once = serialize_problem(p);
        problem q = parse_problem(once);
        CHECK(q == p);
        CHECK(serialize_problem(q) == once);
    }
}

TEST_CASE("golden reports are canonical JSON with canonical scalars", "[cli]") {
    const auto goldens = files_in("golden", ".report.json");
    REQUIRE(goldens.size() >= 10);
    for (const auto &g : goldens) {
        INFO(g.filename().string());
        const std::string text = slurp(g);
        json j = json::parse(text);
        CHECK(to_text(j) == text);
        CHECK(j["version"] == report_version);
        std::vector<std::string> scalars;
        collect_scalars(j["results"], scalars);
        for (const auto &s : scalars) {
            if (s.find(',') != std::string::npos) continue;
            CHECK(format_scalar(parse_scalar(s)) == s);
        }
    }
}

TEST_CASE("malformed problem files are rejected with a location", "[cli]") {
    CHECK_THROWS_AS(parse_problem("{ \"version\": "), parse_error);
    CHECK_THROWS_WITH(parse_problem(R"({"version": "hodge/2", "kind": "mhs"})"),
                      Catch::Matchers::ContainsSubstring("$.version"));
    CHECK_THROWS_WITH(parse_problem(R"({"version": "hodge/1", "kind": "quartic"})"),
                      Catch::Matchers::ContainsSubstring("unknown problem kind"));
    CHECK_THROWS_WITH(parse_problem(R"({"version": "hodge/1", "kind": "weight-filtration", "dim": 2,
                                        "N": [["0", "1"], ["0"]]})"),
                      Catch::Matchers::ContainsSubstring("$.N[1]"));
    CHECK_THROWS_WITH(parse_problem(R"({"version": "hodge/1", "kind": "mhs", "dim": 1, "F": {"a": []}, "W": {}})"),
                      Catch::Matchers::ContainsSubstring("level \"a\""));
    std::string bad = slurp(data_dir / "fixtures" / "malformed.json");
    CHECK_THROWS_WITH(parse_problem(bad), Catch::Matchers::ContainsSubstring("$.F.0[0][0]") &&
                                              Catch::Matchers::ContainsSubstring("at position 4"));
}

TEST_CASE("order override replaces every truncation order", "[cli]") {
    const std::string text = slurp(data_dir / "fixtures" / "amodel.json");
    problem p = parse_problem(text, 1);
    REQUIRE(p.potential);
    CHECK(p.potential->order == 1);
    CHECK(p.potential->instantons.size() == 1);
}

TEST_CASE("run_command maps outcomes to exit codes", "[cli]") {
    const std::string mhs = slurp(data_dir / "fixtures" / "bigrading.json");
    CHECK(run_command("bigrading", mhs).code == exit_pass);
    CHECK(run_command("wdvv", mhs).code == exit_invalid);
    CHECK(run_command("quartic", mhs).code == exit_invalid);
    CHECK(run_command("bigrading", "[1, 2]").code == exit_invalid);
    const std::string missing = slurp(data_dir / "fixtures" / "rel-weight-missing.json");
    run_result r = run_command("rel-weight", missing);
    CHECK(r.code == exit_check_failed);
    CHECK(json::parse(r.report)["error"]["kind"] == "DoesNotExist");
    const std::string orbit = slurp(data_dir / "fixtures" / "orbit-notflat.json");
    run_result nf = run_command("orbit-reconstruct", orbit, {6, std::nullopt});
    CHECK(nf.code == exit_check_failed);
    CHECK(json::parse(nf.report)["error"]["kind"] == "NotFlat");
    CHECK_THAT(nf.summary, Catch::Matchers::ContainsSubstring("i=0, j=1"));
}

TEST_CASE("reports do not depend on the run", "[cli]") {
    const std::string wdvv = slurp(data_dir / "fixtures" / "wdvv.json");
    run_result a = run_command("wdvv", wdvv);
    run_result b = run_command("wdvv", wdvv);
    CHECK(a.report == b.report);
    CHECK(a.summary == "wdvv: pass; associative: true; higgs-flat: true");
    const std::string orbit = slurp(data_dir / "fixtures" / "orbit-reconstruct.json");
    run_result s1 = run_command("orbit-reconstruct", orbit, {4, 1});
    run_result s2 = run_command("orbit-reconstruct", orbit, {4, 99});
    CHECK(s1.code == exit_pass);
    CHECK(s1.report == s2.report);
}

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "wedge/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code = 0;
    std::string out;
    std::string err;
};

Outcome invoke(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = wedge::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

// Scratch directory with the small input files used below.
struct Workspace {
    fs::path dir;
    Workspace() {
        dir = fs::temp_directory_path() / ("wedge_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(dir);
        write("id2.kv", "n=2 breakpoints=-inf,inf piece.0=1,0,0,1\n");
        write("quarter.kv", "m=2 n=2 sector.theta0=1.5707963267948966\n");
        write("mesh.kv", "r_min=0.01 q=0.8 h=0.1 r_max=2 n_theta=12 t_end=0.05 dt_min=0.01 dt_max=0.01\n");
        write("problem.kv", "bc=dirichlet theta0=1.5707963267948966 coeffs=id2.kv initial.center=0.6,0.6 initial.width=0.2\n");
    }
    ~Workspace() {
        std::error_code ec;
        fs::remove_all(dir, ec);
    }
    void write(const std::string& name, const std::string& text) const { std::ofstream(dir / name) << text; }
    [[nodiscard]] std::string path(const std::string& name) const { return (dir / name).string(); }
};

}  // namespace

TEST_SUITE("cli") {
    TEST_CASE("interval example") {
        const auto r = invoke({"intervals", "--kind", "oblique", "--m", "2", "--p", "2", "--lambda-plus", "1",
                               "--lambda-minus", "1"});
        CHECK(r.code == 0);
        CHECK(r.out == "(-1, 1)\n");
    }

    TEST_CASE("kernel example") {
        Workspace ws;
        const auto r = invoke({"kernel", "--coeffs", ws.path("id2.kv"), "--x", "0,0", "--y", "0,0", "--t", "1", "--s", "0"});
        CHECK(r.code == 0);
        CHECK(r.out == "0.0795775\n");
    }

    TEST_CASE("validation failures exit 1 with a message") {
        const auto missing = invoke({"kernel", "--coeffs", "/nonexistent/id2.kv", "--x", "0,0", "--y", "0,0", "--t", "1",
                                     "--s", "0"});
        CHECK(missing.code == 1);
        CHECK_FALSE(missing.err.empty());
        const auto none = invoke({});
        CHECK(none.code == 1);
        CHECK(none.err.find("kernel") != std::string::npos);
        const auto unknown = invoke({"intervals", "--bogus", "3"});
        CHECK(unknown.code == 1);
        CHECK_FALSE(unknown.err.empty());
        const auto bad = invoke({"intervals", "--kind", "oblique", "--m", "2", "--p", "2", "--lambda-plus", "-1",
                                 "--lambda-minus", "1"});
        CHECK(bad.code == 1);
    }

    TEST_CASE("outputs carry the config hash and seed") {
        Workspace ws;
        const std::vector<std::string> args{"solve", "--spec", ws.path("problem.kv"), "--mesh", ws.path("mesh.kv"),
                                            "--seed", "9"};
        const auto r = invoke(args);
        REQUIRE(r.code == 0);
        CHECK(r.out.rfind("# config_hash=", 0) == 0);
        CHECK(r.out.find(" seed=9\n") != std::string::npos);
        auto other = args;
        other.back() = "10";
        const auto r2 = invoke(other);
        CHECK(r2.out.substr(0, r2.out.find('\n')) != r.out.substr(0, r.out.find('\n')));
    }

    TEST_CASE("reruns are byte-identical") {
        Workspace ws;
        const std::vector<std::string> appendix{"appendix", "--lemma", "axis", "--sweep", "40", "--a", "0.5", "--b",
                                                "0.5", "--c", "0.5", "--seed", "3"};
        CHECK(invoke(appendix).out == invoke(appendix).out);

        const std::vector<std::string> solve{"solve", "--spec", ws.path("problem.kv"), "--mesh", ws.path("mesh.kv"),
                                             "--out", ws.path("a.csv")};
        REQUIRE(invoke(solve).code == 0);
        const std::string first = slurp(ws.path("a.csv"));
        REQUIRE(invoke(solve).code == 0);
        CHECK(slurp(ws.path("a.csv")) == first);
        CHECK(first.rfind("# config_hash=", 0) == 0);
        CHECK(first.find("r,theta,t,value") != std::string::npos);
    }

    TEST_CASE("changing a referenced file changes the hash") {
        Workspace ws;
        const std::vector<std::string> solve{"solve", "--spec", ws.path("problem.kv"), "--mesh", ws.path("mesh.kv")};
        const auto before = invoke(solve).out;
        ws.write("mesh.kv", "r_min=0.01 q=0.8 h=0.1 r_max=2 n_theta=12 t_end=0.04 dt_min=0.01 dt_max=0.01\n");
        const auto after = invoke(solve).out;
        CHECK(before.substr(0, before.find('\n')) != after.substr(0, after.find('\n')));
    }
}

#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "nanodesign/binary_io.hpp"
#include "nanodesign/dataset.hpp"
#include "nanodesign/model_io.hpp"

using namespace nanodesign;
namespace fs = std::filesystem;

namespace {

const fs::path& workdir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "nanodesign_cli_test";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string at(const std::string& name) { return (workdir() / name).string(); }

int run(const std::string& args) {
    const std::string cmd = std::string(NANODESIGN_CLI) + " " + args + " > " + at("last_stdout.txt") +
                            " 2> " + at("last_stderr.txt");
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string last_stdout() { return read_file(at("last_stdout.txt")); }

std::vector<std::string> data_rows(const std::string& path) {
    std::ifstream in(path);
    std::vector<std::string> rows;
    std::string line;
    bool header = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header) {
            header = true;
            continue;
        }
        rows.push_back(line);
    }
    return rows;
}

// Small shared fixtures, built once.
const std::string& small_dataset() {
    static const std::string path = [] {
        const std::string p = at("small.nld");
        REQUIRE(run("generate --layers 3 --count 100 --seed 3 --out " + p) == 0);
        return p;
    }();
    return path;
}

const std::string& small_model() {
    static const std::string path = [] {
        const std::string p = at("small.nlm");
        REQUIRE(run("train --data " + small_dataset() + " --epochs 20 --seed 1 --out " + p) == 0);
        return p;
    }();
    return path;
}

}  // namespace

TEST_CASE("generate writes a loadable, reproducible dataset") {
    REQUIRE(run("generate --layers 3 --count 1000 --seed 7 --workers 1 --out " + at("ds_a.nld")) == 0);
    CHECK(last_stdout().find("records: 1000") != std::string::npos);
    CHECK(load_dataset(at("ds_a.nld")).size() == 1000);
    REQUIRE(run("generate --layers 3 --count 1000 --seed 7 --workers 3 --out " + at("ds_b.nld")) == 0);
    CHECK(read_file(at("ds_a.nld")) == read_file(at("ds_b.nld")));
}

TEST_CASE("usage errors exit with code 2") {
    CHECK(run("generate --layers 0 --out " + at("bad.nld")) == 2);
    CHECK_FALSE(fs::exists(at("bad.nld")));
    CHECK(run("generate --count 10 --out " + at("bad.nld")) == 2);
    CHECK(run("frobnicate") == 2);
    CHECK(run("") == 2);
    CHECK(run("train --data " + at("missing.nld") + " --out " + at("m.nlm")) == 2);
    CHECK(run("train --data " + small_dataset() + " --arch cnn --out " + at("m.nlm")) == 2);
    CHECK(run("design --model " + small_model() + " --target-stack 50,40,60 --ga-selection fixed:x --out " +
              at("r.txt")) == 2);
    CHECK(run("design --model " + small_model() + " --target-stack 50,40 --out " + at("r.txt")) == 2);
    CHECK(run("design --model " + small_model() + " --out " + at("r.txt")) == 2);
    CHECK(run("--help") == 0);
    CHECK(run("--version") == 0);
}

TEST_CASE("runtime errors exit with code 1 and leave no output behind") {
    {
        std::ofstream bad(at("corrupt.nld"));
        bad << "NLD1\nformat: nanodesign-dataset\n";
    }
    CHECK(run("train --data " + at("corrupt.nld") + " --out " + at("never.nlm")) == 1);
    CHECK_FALSE(fs::exists(at("never.nlm")));
    CHECK(run("generate --layers 2 --count 5 --out " + at("no_such_dir/x.nld")) == 1);
    CHECK_FALSE(fs::exists(at("no_such_dir")));
}

TEST_CASE("train writes the model and one history row per epoch") {
    REQUIRE(fs::exists(small_model()));
    const auto rows = data_rows(at("small.history.csv"));
    CHECK(rows.size() == 20);
    const std::string history = read_file(at("small.history.csv"));
    CHECK(history.find("epoch,train_loss,mean_val_error") != std::string::npos);
    CHECK(history.find("# seed: 1") != std::string::npos);
    const MlpModel m = load_model(small_model());
    CHECK(m.arch.kind == ArchitectureKind::TwoChannel);
    CHECK(m.arch.hidden_width == 250);
    CHECK(m.provenance.dataset_seed == 3);

    REQUIRE(run("train --data " + small_dataset() + " --arch fcnn --epochs 2 --out " + at("f.nlm") +
                " --history " + at("f_hist.csv")) == 0);
    CHECK(read_file(at("f.nlm")).find("hidden_width: 520\n") != std::string::npos);
    CHECK(data_rows(at("f_hist.csv")).size() == 2);
}

TEST_CASE("training is byte-reproducible across worker counts") {
    REQUIRE(run("train --data " + small_dataset() + " --epochs 3 --seed 5 --workers 1 --out " + at("w1.nlm")) == 0);
    REQUIRE(run("train --data " + small_dataset() + " --epochs 3 --seed 5 --workers 4 --out " + at("w4.nlm")) == 0);
    CHECK(read_file(at("w1.nlm")) == read_file(at("w4.nlm")));
}

TEST_CASE("config files supply defaults and flags override them") {
    {
        std::ofstream cfg(at("train.cfg"));
        cfg << "# training defaults\nepochs: 4\nbatch-size: 16\nseed: 2\n";
    }
    REQUIRE(run("train --config " + at("train.cfg") + " --data " + small_dataset() + " --out " + at("c.nlm")) == 0);
    CHECK(data_rows(at("c.history.csv")).size() == 4);
    CHECK(load_model(at("c.nlm")).config.batch_size == 16);
    REQUIRE(run("train --config " + at("train.cfg") + " --epochs 2 --data " + small_dataset() + " --out " +
                at("c2.nlm")) == 0);
    CHECK(data_rows(at("c2.history.csv")).size() == 2);
    CHECK(run("train --config " + at("missing.cfg") + " --data " + small_dataset() + " --out " + at("c3.nlm")) == 2);
}

TEST_CASE("compare emits one row per layer count, reproducibly") {
    const std::string common = " --layers 2,3 --count 60 --epochs 2 --seed 4 --hidden-layers 2 --hidden-width 16";
    REQUIRE(run("compare" + common + " --out " + at("cmp1.csv")) == 0);
    REQUIRE(run("compare" + common + " --out " + at("cmp2.csv") + " --data-dir " + at("cache")) == 0);
    const auto rows = data_rows(at("cmp1.csv"));
    CHECK(rows.size() == 2);
    CHECK(rows == data_rows(at("cmp2.csv")));
    CHECK(rows[0].rfind("2,", 0) == 0);
    CHECK(fs::exists(at("cmp1.svg")));
    CHECK(fs::exists(at("cache/layers3.nld")));
    REQUIRE(run("compare" + common + " --out " + at("cmp3.csv") + " --data-dir " + at("cache")) == 0);
    CHECK(data_rows(at("cmp3.csv")) == rows);
}

TEST_CASE("design against an oracle target writes report, overlay and plot") {
    const std::string common = " --model " + small_model() + " --max-generations 5 --ft-steps 20 --seed 2";
    REQUIRE(run("design" + common + " --target-stack 50,40,60 --out " + at("design.txt")) == 0);
    const std::string report = read_file(at("design.txt"));
    for (const char* key : {"surrogate_error: ", "oracle_error: ", "designed_stack_nm: ", "ga_history",
                            "ga_selection: adaptive", "target_provenance: oracle spectrum of stack 50,40,60 nm"}) {
        CHECK_MESSAGE(report.find(key) != std::string::npos, key);
    }
    CHECK(data_rows(at("design.overlay.csv")).size() == 400);
    const std::string svg = read_file(at("design.svg"));
    CHECK(svg.rfind("<?xml", 0) == 0);
    CHECK(svg.find("href") == std::string::npos);

    REQUIRE(run("design" + common + " --target-stack 50,40,60 --ga-selection fixed:20 --out " + at("fixed.txt")) == 0);
    const std::string fixed = read_file(at("fixed.txt"));
    CHECK(fixed.find("ga_selection: fixed:20") != std::string::npos);
    CHECK(fixed.find(",20,56,24\n") != std::string::npos);

    REQUIRE(run("design" + common + " --target-stack 50,40,60 --out " + at("again.txt")) == 0);
    CHECK(data_rows(at("again.overlay.csv")) == data_rows(at("design.overlay.csv")));
}

TEST_CASE("design reads targets from datasets and CSV, checking the grid") {
    const std::string common = " --model " + small_model() + " --max-generations 3 --ft-steps 5";
    REQUIRE(run("design" + common + " --target-data " + small_dataset() + " --record 7 --out " + at("d2.txt")) == 0);
    CHECK(read_file(at("d2.txt")).find("record 7") != std::string::npos);

    // overlay CSV doubles as a target file: lambda_nm,target,...
    REQUIRE(run("design" + common + " --target-csv " + at("d2.overlay.csv") + " --out " + at("d3.txt")) == 0);

    {
        std::ofstream short_csv(at("short.csv"));
        short_csv << "lambda_nm,value\n400,1.0\n800,2.0\n";
    }
    CHECK(run("design" + common + " --target-csv " + at("short.csv") + " --out " + at("d4.txt")) == 2);
    CHECK_FALSE(fs::exists(at("d4.txt")));
    REQUIRE(run("generate --layers 3 --count 2 --points 50 --out " + at("grid50.nld")) == 0);
    CHECK(run("design" + common + " --target-data " + at("grid50.nld") + " --out " + at("d5.txt")) == 2);
}

TEST_CASE("eval reports a finite error and writes a held-out overlay") {
    REQUIRE(run("eval --model " + small_model() + " --data " + small_dataset() + " --subset train") == 0);
    const std::string out = last_stdout();
    CHECK(out.find("records: 90") != std::string::npos);
    const auto pos = out.find("\nmean_error: ");
    REQUIRE(pos != std::string::npos);
    const double err = std::stod(out.substr(pos + 13));
    CHECK(std::isfinite(err));
    CHECK(err > 0.0);

    REQUIRE(run("eval --model " + small_model() + " --data " + small_dataset() + " --overlay " + at("ov.csv") +
                " --record 2 --out " + at("eval.txt")) == 0);
    CHECK(data_rows(at("ov.csv")).size() == 400);
    CHECK(fs::exists(at("ov.svg")));
    CHECK(read_file(at("eval.txt")).find("subset: test") != std::string::npos);
    CHECK(run("eval --model " + small_model() + " --data " + at("ds_a.nld")) == 2);
    CHECK(run("eval --model " + small_model() + " --data " + at("ds_a.nld") + " --subset all") == 0);
}

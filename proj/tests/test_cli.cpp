// Scripted exit-code matrix for the pipeline binary. argv[1] is the CLI path.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace {

std::string g_cli;
std::string g_dir;
int g_failures = 0;

int run(const std::string& args) {
    std::string cmd = g_cli + " " + args + " 2>>" + g_dir + "/stderr.log";
    int status = std::system(cmd.c_str());
    if (status < 0) return -1;
    return WEXITSTATUS(status);
}

void expect(const std::string& what, bool ok) {
    if (!ok) {
        ++g_failures;
        std::cerr << "FAIL: " << what << "\n";
    } else {
        std::cout << "ok: " << what << "\n";
    }
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

const char* kModel = R"({
  "input_shape": [4],
  "rho": 12,
  "layers": [
    {"type": "dense", "activation": "relu",
     "weights": [[0.25, -0.5, 0.125, 0.3], [0.1, 0.2, -0.3, 0.4], [0.5, 0.5, 0.25, -0.25]],
     "bias": [0.1, -0.2, 0.05]},
    {"type": "dense", "weights": [[0.5, 0.25, -0.5], [0.3, -0.3, 0.2]], "bias": [0.0, 0.1]}
  ]
})";

const char* kInput = R"({"values": [0.5, -0.25, 0.75, -0.5]})";

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: test_cli <path-to-cli>\n";
        return 1;
    }
    g_cli = argv[1];
    g_dir = "cli_work";
    if (std::system(("rm -rf " + g_dir + " && mkdir -p " + g_dir).c_str()) != 0) {
        std::cerr << "cannot prepare work dir\n";
        return 1;
    }
    write(g_dir + "/model.json", kModel);
    write(g_dir + "/in.json", kInput);
    auto p = [&](const std::string& name) { return g_dir + "/" + name; };

    // compile, both modes
    expect("compile ultragroth exits 0",
           run("compile --model " + p("model.json") + " --mode ultragroth --chunk-width auto -o " +
               p("c.bin")) == 0);
    expect("compile groth16 exits 0",
           run("compile --model " + p("model.json") + " --mode groth16 -o " + p("cg.bin")) == 0);
    expect("report exists", !slurp(p("c.bin.report.json")).empty());
    expect("missing model exits 2", run("compile --model " + p("nope.json") + " -o /dev/null") == 2);
    expect("bad schema exits 2", [&] {
        write(p("bad.json"), R"({"input_shape":[2],"rho":8,"layers":[]})");
        return run("compile --model " + p("bad.json") + " -o /dev/null") == 2;
    }());

    // mock pipeline with fixed seed
    expect("setup exits 0", run("setup -c " + p("c.bin") + " -o " + p("pk.bin") + "," +
                                p("vk.bin") + " --engine mock --seed 7") == 0);
    expect("prove exits 0",
           run("prove -c " + p("c.bin") + " --pk " + p("pk.bin") + " --input " + p("in.json") +
               " -o " + p("proof.bin") + " --public " + p("io.json") +
               " --proof-json " + p("proof.json") + " --engine mock --seed 9") == 0);
    expect("verify accepts", run("verify --vk " + p("vk.bin") + " --public " + p("io.json") +
                                 " --proof " + p("proof.bin") + " --engine mock") == 0);

    // edited public io -> reject (exit 1)
    {
        std::string io = slurp(p("io.json"));
        auto pos = io.find("\"outputs\"");
        pos = io.find('"', io.find('[', pos)) + 1;
        io[pos] = io[pos] == '0' ? '1' : '0';
        write(p("io_bad.json"), io);
        expect("edited public io exits 1",
               run("verify --vk " + p("vk.bin") + " --public " + p("io_bad.json") + " --proof " +
                   p("proof.bin") + " --engine mock") == 1);
    }

    // wrong vk (different circuit) -> digest mismatch, exit 2
    expect("setup on groth16 circuit", run("setup -c " + p("cg.bin") + " -o " + p("pk2.bin") +
                                           "," + p("vk2.bin") + " --engine mock --seed 7") == 0);
    expect("wrong vk exits 2", run("verify --vk " + p("vk2.bin") + " --public " + p("io.json") +
                                   " --proof " + p("proof.bin") + " --engine mock") == 2);
    // stale keys at prove time
    expect("stale pk exits 2",
           run("prove -c " + p("c.bin") + " --pk " + p("pk2.bin") + " --input " + p("in.json") +
               " -o /dev/null --public /dev/null --engine mock --seed 3") == 2);

    // deterministic pipeline: identical bytes with the same seed
    {
        expect("compile determinism",
               run("compile --model " + p("model.json") + " --mode ultragroth -o " + p("c2.bin")) ==
                   0);
        expect("circuit bytes identical", slurp(p("c.bin")) == slurp(p("c2.bin")));
        run("setup -c " + p("c.bin") + " -o " + p("pk_b.bin") + "," + p("vk_b.bin") +
            " --engine mock --seed 7");
        expect("key bytes identical", slurp(p("pk.bin")) == slurp(p("pk_b.bin")) &&
                                          slurp(p("vk.bin")) == slurp(p("vk_b.bin")));
        run("prove -c " + p("c.bin") + " --pk " + p("pk.bin") + " --input " + p("in.json") +
            " -o " + p("proof_b.bin") + " --public " + p("io_b.json") + " --engine mock --seed 9");
        expect("proof bytes identical", slurp(p("proof.bin")) == slurp(p("proof_b.bin")));
    }

    // groth16 mode through the pipeline
    expect("groth16 prove", run("prove -c " + p("cg.bin") + " --pk " + p("pk2.bin") +
                                " --input " + p("in.json") + " -o " + p("proofg.bin") +
                                " --public " + p("iog.json") + " --engine mock --seed 1") == 0);
    expect("groth16 verify", run("verify --vk " + p("vk2.bin") + " --public " + p("iog.json") +
                                 " --proof " + p("proofg.bin") + " --engine mock") == 0);

    // real engine end to end
    expect("real setup", run("setup -c " + p("c.bin") + " -o " + p("pkr.bin") + "," +
                             p("vkr.bin") + " --engine real") == 0);
    expect("real prove", run("prove -c " + p("c.bin") + " --pk " + p("pkr.bin") + " --input " +
                             p("in.json") + " -o " + p("proofr.bin") + " --public " +
                             p("ior.json") + " --engine real") == 0);
    expect("real verify", run("verify --vk " + p("vkr.bin") + " --public " + p("ior.json") +
                              " --proof " + p("proofr.bin") + " --engine real") == 0);
    // seeds are test-only on the real engine
    expect("real seed without flag exits 2",
           run("setup -c " + p("c.bin") + " -o /dev/null,/dev/null --engine real --seed 5") == 2);

    // chunk-opt
    expect("chunk-opt runs", run("chunk-opt --chunks 1048576 --bits 254") == 0);
    expect("report runs", run("report -c " + p("c.bin")) == 0);

    // engine env var override
    expect("env var engine", [&] {
        std::string cmd = "UNR_ENGINE=mock " + g_cli + " verify --vk " + p("vk.bin") +
                          " --public " + p("io.json") + " --proof " + p("proof.bin") +
                          " 2>/dev/null";
        int status = std::system(cmd.c_str());
        return WEXITSTATUS(status) == 0;
    }());

    if (g_failures) {
        std::cerr << g_failures << " cli checks failed\n";
        return 1;
    }
    std::cout << "all cli checks passed\n";
    return 0;
}

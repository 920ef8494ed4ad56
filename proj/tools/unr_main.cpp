// Command-line front end: compile / setup / prove / verify / report /
// chunk-opt. Exit codes: 0 success (verify: accept), 1 verify reject,
// 2 malformed input, schema errors or stale key material.

#include <fstream>
#include <iostream>
#include <sstream>

#include <sys/resource.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "unr/bn254.hpp"
#include "unr/compiler.hpp"
#include "unr/fields.hpp"
#include "unr/mock_engine.hpp"
#include "unr/proving.hpp"

using namespace unr;
using nlohmann::json;

namespace {

constexpr int kExitAccept = 0;
constexpr int kExitReject = 1;
constexpr int kExitError = 2;

Bytes read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    std::string s = ss.str();
    return Bytes(s.begin(), s.end());
}

void write_file(const std::string& path, const Bytes& data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out.write(reinterpret_cast<const char*>(data.data()), std::streamsize(data.size()));
}

void write_file(const std::string& path, const std::string& data) {
    write_file(path, Bytes(data.begin(), data.end()));
}

std::string engine_choice(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    const char* env = std::getenv("UNR_ENGINE");
    if (env && *env) return env;
    return "mock";
}

double peak_rss_mb() {
    struct rusage ru{};
    getrusage(RUSAGE_SELF, &ru);
    return double(ru.ru_maxrss) / 1024.0;
}

std::unique_ptr<RandomSource> make_rng(std::optional<uint64_t> seed, const std::string& engine,
                                       bool insecure_ok) {
    if (seed) {
        if (engine != "mock" && !insecure_ok)
            throw std::runtime_error(
                "--seed is test-only: use engine=mock or pass --insecure-seed");
        return std::make_unique<SeededRng>(*seed);
    }
    std::random_device rd;
    uint64_t s = (uint64_t(rd()) << 32) ^ rd();
    return std::make_unique<SeededRng>(s);
}

json report_json(const CompiledCircuit& c) {
    json layers = json::array();
    for (const LayerReport& r : c.report) {
        layers.push_back({{"name", r.name},
                          {"constraints", r.constraints},
                          {"activation_constraints", r.activation_constraints},
                          {"activation_sites", r.activation_sites},
                          {"lookup_tags", r.lookup_tags},
                          {"product_constraints", r.product_constraints},
                          {"binding_constraints", r.binding_constraints},
                          {"width_b", r.width_b},
                          {"formula", r.formula},
                          {"formula_prediction", r.formula_prediction},
                          {"formula_prediction_field_b",
                           r.width_b > 0 ? r.formula_prediction / r.width_b * 252.0 : 0.0},
                          {"ratio", r.formula_prediction > 0
                                        ? double(r.constraints) / r.formula_prediction
                                        : 0.0}});
    }
    return json{{"mode", c.mode == ProofMode::ultragroth ? "ultragroth" : "groth16"},
                {"rho", c.rho},
                {"chunk_width", c.chunk_width},
                {"constraints", c.total_constraints()},
                {"witness_size", c.cs.num_wires()},
                {"outputs", c.output_wires.size()},
                {"output_precision", c.output_precision},
                {"circuit_digest", hex_encode(c.digest())},
                {"layers", layers}};
}

void print_report_table(const CompiledCircuit& c) {
    std::cerr << "layer                     constraints   activations  tags   B   prediction\n";
    for (const LayerReport& r : c.report) {
        std::fprintf(stderr, "%-25s %11zu %13zu %5zu %3u %12.0f\n", r.name.c_str(), r.constraints,
                     r.activation_constraints, r.lookup_tags, r.width_b, r.formula_prediction);
    }
    std::fprintf(stderr, "total constraints: %zu, witness %u wires\n", c.total_constraints(),
                 c.cs.num_wires());
}

std::vector<double> read_input_values(const std::string& path, size_t expect) {
    json j = json::parse(read_file(path));
    std::vector<double> vals;
    for (const auto& v : j.at("values")) vals.push_back(v.get<double>());
    if (vals.size() != expect)
        throw std::runtime_error("input has " + std::to_string(vals.size()) + " values, circuit expects " +
                                 std::to_string(expect));
    return vals;
}

template <class E>
int do_setup(const E& eng, const CompiledCircuit& c, const std::string& out_spec,
             const std::string& trapdoor_path, RandomSource& rng) {
    auto comma = out_spec.find(',');
    if (comma == std::string::npos)
        throw std::runtime_error("setup -o expects pk.bin,vk.bin");
    std::string pk_path = out_spec.substr(0, comma);
    std::string vk_path = out_spec.substr(comma + 1);
    if (pk_path == vk_path) throw std::runtime_error("pk and vk paths must be distinct");
    auto sr = setup(eng, c.cs, c.digest(), rng, !trapdoor_path.empty());
    write_file(pk_path, serialize_pk(eng, sr.pk));
    write_file(vk_path, serialize_vk(eng, sr.vk));
    if (!trapdoor_path.empty()) write_file(trapdoor_path, serialize_trapdoor(*sr.trapdoor));
    std::cerr << "wrote " << pk_path << " and " << vk_path << "\n";
    return kExitAccept;
}

template <class E>
int do_prove(const E& eng, const CompiledCircuit& c, const std::string& pk_path,
             const std::string& input_path, const std::string& proof_path,
             const std::string& io_path, const std::string& proof_json_path, RandomSource& rng) {
    auto pk = deserialize_pk(eng, read_file(pk_path));
    if (pk.circuit_digest != c.digest()) {
        std::cerr << "stale keys: proving key was generated for a different circuit\n";
        return kExitError;
    }
    size_t n_in = 1;
    for (uint32_t d : c.input_shape) n_in *= d;
    std::vector<double> input = read_input_values(input_path, n_in);

    auto t0 = std::chrono::steady_clock::now();
    auto pr = prove(eng, pk, c.cs, make_round_filler(c, input), rng);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    write_file(proof_path, serialize_proof(eng, pr.proof, c.digest()));
    json io;
    io["outputs"] = json::array();
    for (const Fp& x : pr.public_inputs) io["outputs"].push_back(hex_encode(x.to_bytes()));
    io["challenges"] = json::array();
    for (const Fp& x : pr.challenges) io["challenges"].push_back(hex_encode(x.to_bytes()));
    write_file(io_path, io.dump(2) + "\n");
    if (!proof_json_path.empty()) {
        json pj;
        pj["pi_a"] = hex_encode(eng.g1_to_bytes(pr.proof.a));
        pj["pi_b"] = hex_encode(eng.g2_to_bytes(pr.proof.b));
        pj["pi_c"] = json::array();
        for (const auto& ci : pr.proof.c) pj["pi_c"].push_back(hex_encode(eng.g1_to_bytes(ci)));
        pj["challenges"] = io["challenges"];
        write_file(proof_json_path, pj.dump(2) + "\n");
    }
    json stats{{"prove_seconds", secs}, {"peak_rss_mb", peak_rss_mb()}};
    write_file(proof_path + ".stats.json", stats.dump(2) + "\n");
    std::cerr << "proved in " << secs << " s, peak rss " << peak_rss_mb() << " MB\n";
    return kExitAccept;
}

template <class E>
int do_verify(const E& eng, const std::string& vk_path, const std::string& io_path,
              const std::string& proof_path) {
    auto vk = deserialize_vk(eng, read_file(vk_path));
    auto [proof, digest] = deserialize_proof(eng, read_file(proof_path));
    if (digest != vk.circuit_digest) {
        std::cerr << "stale keys: proof and verifying key bind different circuits\n";
        return kExitError;
    }
    json io = json::parse(read_file(io_path));
    const PrimeField& f = eng.scalar_field();
    std::vector<Fp> outputs, claimed;
    for (const auto& h : io.at("outputs")) outputs.push_back(f.from_bytes(hex_decode(h)));
    if (io.contains("challenges"))
        for (const auto& h : io.at("challenges")) claimed.push_back(f.from_bytes(hex_decode(h)));
    auto res = verify(eng, vk, outputs, proof, claimed);
    if (res.accepted) {
        std::cerr << "accept (" << res.pairings << " pairings, " << res.hashes << " hashes)\n";
        return kExitAccept;
    }
    std::cerr << "reject: " << res.reason << "\n";
    return kExitReject;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"zkml pipeline: compile fixed-weight models to R1CS and prove with "
                 "Groth16/UltraGroth"};
    app.require_subcommand(1);

    // compile
    auto* cmd_compile = app.add_subcommand("compile", "compile a model into a circuit");
    std::string model_path, circuit_out = "circuit.bin", mode_str = "ultragroth";
    std::string chunk_width_str = "auto";
    uint32_t rho_override = 0;
    cmd_compile->add_option("--model", model_path)->required();
    cmd_compile->add_option("--mode", mode_str)->check(CLI::IsMember({"groth16", "ultragroth"}));
    cmd_compile->add_option("--rho", rho_override);
    cmd_compile->add_option("--chunk-width", chunk_width_str);
    cmd_compile->add_option("-o,--output", circuit_out);

    // setup
    auto* cmd_setup = app.add_subcommand("setup", "generate proving and verifying keys");
    std::string circuit_path, setup_out = "pk.bin,vk.bin", trapdoor_path, engine_flag;
    std::optional<uint64_t> seed;
    bool insecure_seed = false;
    cmd_setup->add_option("-c,--circuit", circuit_path)->required();
    cmd_setup->add_option("-o,--output", setup_out);
    cmd_setup->add_option("--test-trapdoor", trapdoor_path);
    cmd_setup->add_option("--engine", engine_flag)->check(CLI::IsMember({"mock", "real"}));
    cmd_setup->add_option("--seed", seed);
    cmd_setup->add_flag("--insecure-seed", insecure_seed);

    // prove
    auto* cmd_prove = app.add_subcommand("prove", "generate a proof");
    std::string pk_path, input_path, proof_out = "proof.bin", io_out = "io.json",
                proof_json_out;
    cmd_prove->add_option("-c,--circuit", circuit_path)->required();
    cmd_prove->add_option("--pk", pk_path)->required();
    cmd_prove->add_option("--input", input_path)->required();
    cmd_prove->add_option("-o,--output", proof_out);
    cmd_prove->add_option("--public", io_out);
    cmd_prove->add_option("--proof-json", proof_json_out);
    cmd_prove->add_option("--engine", engine_flag)->check(CLI::IsMember({"mock", "real"}));
    cmd_prove->add_option("--seed", seed);
    cmd_prove->add_flag("--insecure-seed", insecure_seed);

    // verify
    auto* cmd_verify = app.add_subcommand("verify", "verify a proof");
    std::string vk_path, io_path, proof_path;
    cmd_verify->add_option("--vk", vk_path)->required();
    cmd_verify->add_option("--public", io_path)->required();
    cmd_verify->add_option("--proof", proof_path)->required();
    cmd_verify->add_option("--engine", engine_flag)->check(CLI::IsMember({"mock", "real"}));

    // report
    auto* cmd_report = app.add_subcommand("report", "print the per-layer constraint report");
    cmd_report->add_option("-c,--circuit", circuit_path)->required();

    // chunk-opt
    auto* cmd_chunk = app.add_subcommand("chunk-opt", "optimal lookup chunk width");
    uint64_t chunks = 0;
    uint32_t bits = 254;
    cmd_chunk->add_option("--chunks", chunks)->required();
    cmd_chunk->add_option("--bits", bits);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*cmd_compile) {
            Bytes raw = read_file(model_path);
            ModelGraph g = load_model(std::string(raw.begin(), raw.end()));
            if (rho_override) g.rho = rho_override;
            ProofMode mode =
                mode_str == "ultragroth" ? ProofMode::ultragroth : ProofMode::groth16;
            uint32_t w = 0;
            if (chunk_width_str != "auto") w = uint32_t(std::stoul(chunk_width_str));
            CompiledCircuit c = compile(g, mode, w);
            write_file(circuit_out, c.serialize());
            write_file(circuit_out + ".report.json", report_json(c).dump(2) + "\n");
            print_report_table(c);
            std::cerr << "wrote " << circuit_out << "\n";
            return kExitAccept;
        }

        if (*cmd_chunk) {
            auto ch = optimal_chunk_width(chunks, bits);
            json out{{"w", ch.w_int}, {"w_stationary", ch.w_real}, {"cost", ch.cost}};
            std::cout << out.dump(2) << "\n";
            return kExitAccept;
        }

        if (*cmd_report) {
            CompiledCircuit c = CompiledCircuit::deserialize(read_file(circuit_path));
            std::cout << report_json(c).dump(2) << "\n";
            print_report_table(c);
            return kExitAccept;
        }

        std::string engine = engine_choice(engine_flag);
        if (*cmd_setup || *cmd_prove) {
            CompiledCircuit c = CompiledCircuit::deserialize(read_file(circuit_path));
            auto rng = make_rng(seed, engine, insecure_seed);
            if (engine == "real") {
                if (!(c.cs.field() == Bn254Engine::instance().scalar_field()))
                    throw std::runtime_error("circuit field does not match the real engine");
                const Bn254Engine& eng = Bn254Engine::instance();
                if (*cmd_setup) return do_setup(eng, c, setup_out, trapdoor_path, *rng);
                return do_prove(eng, c, pk_path, input_path, proof_out, io_out, proof_json_out,
                                *rng);
            }
            MockEngine eng(c.cs.field());
            if (*cmd_setup) return do_setup(eng, c, setup_out, trapdoor_path, *rng);
            return do_prove(eng, c, pk_path, input_path, proof_out, io_out, proof_json_out, *rng);
        }

        if (*cmd_verify) {
            if (engine == "real")
                return do_verify(Bn254Engine::instance(), vk_path, io_path, proof_path);
            // the mock engine needs the scalar field; recover it from the vk header
            MockEngine eng(bn254_fr());
            return do_verify(eng, vk_path, io_path, proof_path);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}

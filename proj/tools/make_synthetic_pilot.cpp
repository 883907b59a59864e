// Writes a synthetic prevalent-cohort pilot (length-biased, forward-censored)
// as a time,status CSV.
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "biastol/pilot.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Synthetic length-biased pilot sample", "make_synthetic_pilot"};
    std::uint64_t seed = 0;
    double shape = biastol::kCshaLikeTarget.shape;
    double rate = biastol::kCshaLikeTarget.rate;
    double censor_rate = biastol::kCshaLikeCensorRate;
    std::size_t n = biastol::kCshaLikeSize;
    std::string output;
    app.add_option("--seed", seed, "Master seed")->required();
    app.add_option("--shape", shape, "Target Gamma shape")->check(CLI::PositiveNumber);
    app.add_option("--rate", rate, "Target Gamma rate")->check(CLI::PositiveNumber);
    app.add_option("--censor-rate", censor_rate, "Censored fraction")->check(CLI::Range(0.0, 0.9));
    app.add_option("--n", n, "Subjects")->check(CLI::Range(2, 100000000));
    app.add_option("-o,--output", output, "CSV path (default stdout)");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    try {
        const auto sample = biastol::synthetic_pilot({shape, rate}, censor_rate, n, seed);
        if (output.empty()) {
            biastol::write_pilot_csv(std::cout, sample.records);
        } else {
            std::ofstream file(output);
            biastol::write_pilot_csv(file, sample.records);
            if (!file) throw std::runtime_error("cannot write " + output);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

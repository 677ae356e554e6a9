#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "saecula/json_io.hpp"

namespace {

std::string read_input(const std::string& path) {
    if (path == "-") {
        std::ostringstream os;
        os << std::cin.rdbuf();
        return os.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw saecula::SchemaError("cannot open input file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

long worker_threads() {
    const char* env = std::getenv("SAECULA_THREADS");
    if (!env) return 1;
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1)
        throw saecula::SchemaError("SAECULA_THREADS must be a positive integer");
    return v;
}

} // namespace

int main(int argc, char** argv) {
    using namespace saecula;

    CLI::App app{"exact interval decomposition of finite chain diagrams"};
    app.require_subcommand(1);

    std::string format = "json";
    app.add_option("--format", format, "output format")
        ->check(CLI::IsMember({"json", "table"}))
        ->capture_default_str();
    long seed = 0;
    app.add_option("--seed", seed, "seed for randomized subroutines (none currently)");

    std::string ab_mode, ab_input;
    CLI::App* ab = app.add_subcommand("abelian", "chain diagrams of f.g. abelian groups");
    ab->add_option("mode", ab_mode, "barcode, cdf, series or pdb")
        ->required()
        ->check(CLI::IsMember({"barcode", "cdf", "series", "pdb"}));
    ab->add_option("input", ab_input, "input JSON file, or - for stdin")->required();

    std::string ho_mode, ho_input;
    long dim = 1, page = 1;
    CLI::App* ho = app.add_subcommand("homology", "filtered chain complexes");
    ho->add_option("mode", ho_mode, "barcode, spectral or enumcheck")
        ->required()
        ->check(CLI::IsMember({"barcode", "spectral", "enumcheck"}));
    ho->add_option("input", ho_input, "input JSON file, or - for stdin")->required();
    ho->add_option("--dim", dim, "homology degree (enumcheck: largest degree)")
        ->capture_default_str();
    ho->add_option("--page", page, "spectral page r (enumcheck: largest r, -1 for all)")
        ->capture_default_str();

    std::string gr_mode, gr_input;
    CLI::App* gr = app.add_subcommand("group", "chain diagrams of finite groups");
    gr->add_option("mode", gr_mode, "barcode, normalized or lattice")
        ->required()
        ->check(CLI::IsMember({"barcode", "normalized", "lattice"}));
    gr->add_option("input", gr_input, "input JSON file, or - for stdin")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        (void)worker_threads(); // single-threaded engine; validates the cap
        bool table = format == "table";
        std::string out;

        if (ab->parsed()) {
            ChainDiagram d = parse_chain_diagram(read_input(ab_input));
            validate_or_throw(d);
            long n = d.length();
            if (ab_mode == "barcode") {
                Barcode bc = barcode(d);
                out = table ? barcode_table(bc, n) : barcode_json(bc, n);
            } else if (ab_mode == "cdf") {
                CdfTable t = cdf_table(d);
                out = table ? cdf_table_text(t) : cdf_json(t);
            } else if (ab_mode == "series") {
                SubsaecularSeries s = subsaecular_series(d);
                out = table ? series_table(s, n) : series_json(s, n);
            } else {
                TypeBPd pd = type_b_pd(d);
                out = table ? type_b_table(pd, n) : type_b_json(pd, n);
            }
        } else if (ho->parsed()) {
            FilteredComplex x = parse_filtered_complex(read_input(ho_input));
            validate_or_throw(x);
            long n = x.top_grade();
            if (ho_mode == "barcode") {
                HomologyBarcode bc = homology_barcode(x, dim);
                out = table ? homology_barcode_table(bc, n) : homology_barcode_json(bc, n);
            } else if (ho_mode == "spectral") {
                std::vector<SpectralTerm> terms = ls_terms(x, dim, page);
                out = table ? spectral_table(terms) : spectral_json(terms);
            } else {
                long maxdim = ho->count("--dim") ? dim : x.top_dim();
                long rmax = ho->count("--page") ? page : -1;
                LsReport rep = ls_enumeration_check(x, maxdim, rmax);
                out = table ? ls_report_table(rep) : ls_report_json(rep);
            }
        } else {
            GroupDiagram d = parse_group_diagram(read_input(gr_input));
            validate_or_throw(d);
            long n = d.length();
            if (gr_mode == "barcode") {
                auto bc = coset_barcode(d);
                out = table ? coset_barcode_table(bc, n) : coset_barcode_json(bc, n);
            } else if (gr_mode == "normalized") {
                auto bc = normalized_barcode(d);
                out = table ? normalized_barcode_table(bc, n) : normalized_barcode_json(bc, n);
            } else {
                GSaecular s = g_saecular(d);
                out = table ? lattice_summary_table(s) : lattice_summary_json(s);
            }
        }
        std::cout << out;
        return 0;
    } catch (const SchemaError& e) {
        std::cerr << "schema error: " << e.what() << "\n";
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 3;
    } catch (const NaturalityFailure& e) {
        std::cerr << "naturality failure: " << e.what() << "\n";
        return 4;
    } catch (const InfiniteLengthError& e) {
        std::cerr << "infinite length: " << e.what() << "\n";
        return 5;
    } catch (const OrderCapError& e) {
        std::cerr << "order cap: " << e.what() << "\n";
        return 6;
    }
}

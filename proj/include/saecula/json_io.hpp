#pragma once

#include <string>

#include "saecula/fingroup.hpp"
#include "saecula/homology.hpp"

namespace saecula {

// All parsers throw SchemaError on malformed input and leave mathematical
// validity to the validate() functions. All serializers produce
// deterministic output: object keys in fixed order, intervals sorted by
// (p, q), and a trailing newline.

Coeff parse_coeff(const std::string& tag);

ChainDiagram parse_chain_diagram(const std::string& text);
FilteredComplex parse_filtered_complex(const std::string& text);
GroupDiagram parse_group_diagram(const std::string& text);

std::string interval_json(const Interval& itv, long n);

std::string barcode_json(const Barcode& bc, long n);
std::string barcode_table(const Barcode& bc, long n);

std::string cdf_json(const CdfTable& t);
std::string cdf_table_text(const CdfTable& t);

std::string series_json(const SubsaecularSeries& s, long n);
std::string series_table(const SubsaecularSeries& s, long n);

std::string type_b_json(const TypeBPd& pd, long n);
std::string type_b_table(const TypeBPd& pd, long n);

std::string homology_barcode_json(const HomologyBarcode& bc, long n);
std::string homology_barcode_table(const HomologyBarcode& bc, long n);

std::string spectral_json(const std::vector<SpectralTerm>& page);
std::string spectral_table(const std::vector<SpectralTerm>& page);

std::string ls_report_json(const LsReport& r);
std::string ls_report_table(const LsReport& r);

std::string coset_barcode_json(const std::map<Interval, CosetFactor>& bc, long n);
std::string coset_barcode_table(const std::map<Interval, CosetFactor>& bc, long n);

std::string normalized_barcode_json(const std::map<Interval, NormalizedFactor>& bc, long n);
std::string normalized_barcode_table(const std::map<Interval, NormalizedFactor>& bc, long n);

std::string lattice_summary_json(const GSaecular& g);
std::string lattice_summary_table(const GSaecular& g);

} // namespace saecula

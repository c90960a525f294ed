#ifndef HUBLAB_IO_HPP_
#define HUBLAB_IO_HPP_

#include <iosfwd>
#include <string>
#include <vector>

#include "hublab/family.hpp"
#include "hublab/graph.hpp"
#include "hublab/labeling.hpp"

namespace hublab {

// Graph text format: header "n m", then m lines "u v w". '#' starts a comment.
WeightedGraph read_graph(std::istream& in);
WeightedGraph read_graph_file(const std::string& path);
void write_graph(std::ostream& out, const WeightedGraph& g);
void write_graph_file(const std::string& path, const WeightedGraph& g);

// Label text format: one line per vertex, "v: (h1,d1) (h2,d2) ...".
HubLabeling read_labels(std::istream& in);
HubLabeling read_labels_file(const std::string& path);
void write_labels(std::ostream& out, const HubLabeling& hl);
void write_labels_file(const std::string& path, const HubLabeling& hl);

// Sidecar metadata (JSON) for generated family instances.
std::string family_metadata(const FamilyInstance& inst);
void write_family_files(const std::string& graph_path, const std::string& meta_path, const FamilyInstance& inst);
// Ownership data is not persisted, so loaded instances cannot be passed to delete_level_mid.
FamilyInstance read_family_files(const std::string& graph_path, const std::string& meta_path);

// One coordinate vector per line, entries separated by spaces or commas.
std::vector<std::vector<unsigned>> read_coord_list_file(const std::string& path, unsigned dim);

} // namespace hublab

#endif // HUBLAB_IO_HPP_

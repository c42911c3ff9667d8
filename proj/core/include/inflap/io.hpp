// ASCII VTU and CSV output.

#ifndef INFLAP_IO_HPP
#define INFLAP_IO_HPP

#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "inflap/adapt.hpp"
#include "inflap/convergence.hpp"

namespace inflap {

class IoError : public std::runtime_error {
 public:
  IoError(const std::string& what, std::filesystem::path path)
      : std::runtime_error(what + ": " + path.string()), path_(std::move(path)) {}
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

struct VtuField {
  enum class Location { Point, Cell };
  std::string name;
  Location location = Location::Point;
  int components = 1;
  std::vector<double> data;
};

VtuField point_field(std::string name, const P1Function& u);
/// Four components per cell, row-major.
VtuField cell_field(std::string name, const TensorField& t);
VtuField cell_field(std::string name, std::vector<double> values);

/// XML UnstructuredGrid, ASCII. Triangles are VTK cell type 5, points carry z = 0.
void write_vtu(const Triangulation& mesh, std::span<const VtuField> fields,
               const std::filesystem::path& path);

inline const char* kEocCsvHeader =
    "level,h,dofs,l2_error,l2_eoc,h1_error,h1_eoc,estimator,estimator_eoc,iterations";
inline const char* kHistoryCsvHeader =
    "cycle,dofs,triangles,estimate,estimate_l1,iterations,l2_error,h1_error";

/// Reals are written with 17 significant digits; undefined entries are left blank.
void write_csv(const EOCTable& table, const std::filesystem::path& path);
void write_csv(const AdaptiveHistory& history, const std::filesystem::path& path);

}  // namespace inflap

#endif  // INFLAP_IO_HPP

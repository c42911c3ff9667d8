#include "inflap/io.hpp"

#include <fstream>
#include <iomanip>
#include <optional>

namespace inflap {

namespace {

std::ofstream open_for_writing(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::out | std::ios::trunc);
  if (!out) throw IoError("cannot open file for writing", path);
  out << std::setprecision(17);
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("write failed", path);
}

void put(std::ostream& os, const std::optional<double>& v) {
  if (v) os << *v;
}

void write_array(std::ostream& os, const VtuField& f) {
  os << "        <DataArray type=\"Float64\" Name=\"" << f.name << "\" NumberOfComponents=\""
     << f.components << "\" format=\"ascii\">\n          ";
  for (std::size_t i = 0; i < f.data.size(); ++i) {
    os << f.data[i] << ((i + 1) % static_cast<std::size_t>(f.components) == 0 ? '\n' : ' ');
    if ((i + 1) % static_cast<std::size_t>(f.components) == 0 && i + 1 < f.data.size()) os << "          ";
  }
  os << "        </DataArray>\n";
}

}  // namespace

VtuField point_field(std::string name, const P1Function& u) {
  return VtuField{std::move(name), VtuField::Location::Point, 1,
                  std::vector<double>(u.values.data(), u.values.data() + u.values.size())};
}

VtuField cell_field(std::string name, const TensorField& t) {
  return VtuField{std::move(name), VtuField::Location::Cell, 4,
                  std::vector<double>(t.values.data(), t.values.data() + t.values.size())};
}

VtuField cell_field(std::string name, std::vector<double> values) {
  return VtuField{std::move(name), VtuField::Location::Cell, 1, std::move(values)};
}

void write_vtu(const Triangulation& mesh, std::span<const VtuField> fields,
               const std::filesystem::path& path) {
  for (const VtuField& f : fields) {
    const std::size_t n = f.location == VtuField::Location::Point ? mesh.num_vertices() : mesh.num_triangles();
    if (f.components < 1 || f.data.size() != n * static_cast<std::size_t>(f.components)) {
      throw std::invalid_argument("write_vtu: field '" + f.name + "' has the wrong length");
    }
  }
  std::ofstream out = open_for_writing(path);
  out << "<?xml version=\"1.0\"?>\n"
      << "<VTKFile type=\"UnstructuredGrid\" version=\"0.1\" byte_order=\"LittleEndian\">\n"
      << "  <UnstructuredGrid>\n"
      << "    <Piece NumberOfPoints=\"" << mesh.num_vertices() << "\" NumberOfCells=\""
      << mesh.num_triangles() << "\">\n";

  out << "      <PointData>\n";
  for (const VtuField& f : fields) {
    if (f.location == VtuField::Location::Point) write_array(out, f);
  }
  out << "      </PointData>\n      <CellData>\n";
  for (const VtuField& f : fields) {
    if (f.location == VtuField::Location::Cell) write_array(out, f);
  }
  out << "      </CellData>\n";

  out << "      <Points>\n"
      << "        <DataArray type=\"Float64\" NumberOfComponents=\"3\" format=\"ascii\">\n";
  for (const Vertex& v : mesh.vertices()) out << "          " << v.x.x() << ' ' << v.x.y() << " 0\n";
  out << "        </DataArray>\n      </Points>\n";

  out << "      <Cells>\n"
      << "        <DataArray type=\"Int64\" Name=\"connectivity\" format=\"ascii\">\n";
  for (const Triangle& t : mesh.triangles()) {
    out << "          " << t.vertices[0] << ' ' << t.vertices[1] << ' ' << t.vertices[2] << '\n';
  }
  out << "        </DataArray>\n"
      << "        <DataArray type=\"Int64\" Name=\"offsets\" format=\"ascii\">\n";
  for (std::size_t k = 0; k < mesh.num_triangles(); ++k) out << "          " << 3 * (k + 1) << '\n';
  out << "        </DataArray>\n"
      << "        <DataArray type=\"UInt8\" Name=\"types\" format=\"ascii\">\n";
  for (std::size_t k = 0; k < mesh.num_triangles(); ++k) out << "          5\n";
  out << "        </DataArray>\n      </Cells>\n"
      << "    </Piece>\n  </UnstructuredGrid>\n</VTKFile>\n";
  finish(out, path);
}

void write_csv(const EOCTable& table, const std::filesystem::path& path) {
  std::ofstream out = open_for_writing(path);
  out << kEocCsvHeader << '\n';
  for (const EOCRow& r : table.rows) {
    out << r.level << ',' << r.h << ',' << r.dofs << ',' << r.l2_error << ',';
    put(out, r.l2_eoc);
    out << ',' << r.h1_error << ',';
    put(out, r.h1_eoc);
    out << ',' << r.estimator << ',';
    put(out, r.estimator_eoc);
    out << ',' << r.iterations << '\n';
  }
  finish(out, path);
}

void write_csv(const AdaptiveHistory& history, const std::filesystem::path& path) {
  std::ofstream out = open_for_writing(path);
  out << kHistoryCsvHeader << '\n';
  for (const CycleRecord& c : history.cycles) {
    out << c.cycle << ',' << c.dofs << ',' << c.triangles << ',' << c.estimate << ',' << c.estimate_l1
        << ',' << c.iterations << ',';
    put(out, c.l2_error);
    out << ',';
    put(out, c.h1_error);
    out << '\n';
  }
  finish(out, path);
}

}  // namespace inflap

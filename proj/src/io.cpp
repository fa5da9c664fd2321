#include "netctl/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

namespace netctl {

namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::ifstream open_for_read(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInputError("cannot open " + path.string());
  return in;
}

}  // namespace

void write_csv(const std::filesystem::path& path,
               const Eigen::Ref<const Matrix>& m) {
  std::ofstream out(path);
  if (!out) throw InvalidInputError("cannot open " + path.string());
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
  if (!out) throw InvalidInputError("write failed for " + path.string());
}

Matrix read_csv(const std::filesystem::path& path) {
  std::ifstream in = open_for_read(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      row.push_back(std::stod(cell));
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw InvalidInputError("ragged CSV in " + path.string());
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) return Matrix(0, 0);
  Matrix m(static_cast<Index>(rows.size()),
           static_cast<Index>(rows.front().size()));
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
  }
  return m;
}

void save_data_matrices(const std::filesystem::path& dir,
                        const DataMatrices& data) {
  data.validate();
  std::filesystem::create_directories(dir);
  write_csv(dir / "U.csv", data.u);
  write_csv(dir / "Ymid.csv", data.y_mid);
  write_csv(dir / "YT.csv", data.y_t);
  if (data.x0.has_value()) write_csv(dir / "X0.csv", *data.x0);

  nlohmann::json meta;
  meta["T"] = data.horizon;
  meta["m"] = data.m;
  meta["p"] = data.p;
  meta["n"] = data.n;
  meta["seed"] = data.seed;
  std::ofstream out(dir / "meta.json");
  if (!out) throw InvalidInputError("cannot open " + (dir / "meta.json").string());
  out << meta.dump(2) << '\n';
}

DataMatrices load_data_matrices(const std::filesystem::path& dir) {
  std::ifstream meta_in = open_for_read(dir / "meta.json");
  nlohmann::json meta = nlohmann::json::parse(meta_in);

  DataMatrices data;
  data.horizon = meta.at("T").get<Index>();
  data.m = meta.at("m").get<Index>();
  data.p = meta.at("p").get<Index>();
  data.n = meta.at("n").get<Index>();
  data.seed = meta.at("seed").get<std::uint64_t>();
  data.u = read_csv(dir / "U.csv");
  data.y_mid = read_csv(dir / "Ymid.csv");
  data.y_t = read_csv(dir / "YT.csv");
  if (std::filesystem::exists(dir / "X0.csv")) {
    data.x0 = read_csv(dir / "X0.csv");
  }
  data.validate();
  return data;
}

void save_network(const std::filesystem::path& path, const LinearNetwork& net,
                  const std::string& comment) {
  std::ofstream out(path);
  if (!out) throw InvalidInputError("cannot open " + path.string());
  if (!comment.empty()) out << "# " << comment << '\n';
  out << net.n() << ' ' << net.m() << ' ' << net.p() << '\n';
  auto write_rows = [&](const Matrix& m) {
    for (Index i = 0; i < m.rows(); ++i) {
      for (Index j = 0; j < m.cols(); ++j) {
        if (j > 0) out << ' ';
        out << format_double(m(i, j));
      }
      out << '\n';
    }
  };
  write_rows(net.a);
  write_rows(net.b);
  write_rows(net.c);
  if (!out) throw InvalidInputError("write failed for " + path.string());
}

LinearNetwork load_network(const std::filesystem::path& path) {
  std::ifstream in = open_for_read(path);
  std::string line;
  auto next_data_line = [&]() -> std::string {
    while (std::getline(in, line)) {
      auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '#') continue;
      return line;
    }
    throw InvalidInputError("truncated network file " + path.string());
  };

  Index n = 0, m = 0, p = 0;
  {
    std::stringstream header(next_data_line());
    if (!(header >> n >> m >> p) || n < 1 || m < 1 || p < 1) {
      throw InvalidInputError("bad network header in " + path.string());
    }
  }
  auto read_block = [&](Index rows, Index cols) {
    Matrix block(rows, cols);
    for (Index i = 0; i < rows; ++i) {
      std::stringstream row(next_data_line());
      for (Index j = 0; j < cols; ++j) {
        if (!(row >> block(i, j))) {
          throw InvalidInputError("bad matrix row in " + path.string());
        }
      }
    }
    return block;
  };
  Matrix a = read_block(n, n);
  Matrix b = read_block(n, m);
  Matrix c = read_block(p, n);
  return LinearNetwork{std::move(a), std::move(b), std::move(c)};
}

}  // namespace netctl

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "aniso/atoms.hpp"

namespace aniso {

namespace {

static_assert(std::endian::native == std::endian::little,
              "binary atom files assume a little-endian host");

constexpr char kMagic[8] = {'A', 'N', 'I', 'S', 'O', 'A', 'T', 'M'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void write_raw(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_raw(std::istream& is) {
  T v;
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw FileFormat("unexpected end of atom file");
  return v;
}

double encode_q(double q) { return std::isinf(q) ? -1.0 : q; }
double decode_q(double q) {
  return q < 0.0 ? std::numeric_limits<double>::infinity() : q;
}

Atom rebuild(int n, const Eigen::MatrixXd& matrix, int scale,
             const Eigen::VectorXd& center, double p, double q, int s,
             int grid_res, double cell_volume, std::uint64_t seed,
             std::vector<double> samples, const DilationOptions& dopts,
             const QuasiNormOptions& qopts) {
  DilationMatrix d = DilationMatrix::validate(matrix, dopts);
  QuasiNorm qn = QuasiNorm::build(d, qopts);
  AdmissibleTriplet triplet = AdmissibleTriplet::make(p, q, s, d);
  Atom atom = atom_from_parts(std::move(qn), triplet, center, scale, grid_res,
                              seed, std::move(samples));
  if (std::abs(atom.cell_volume() - cell_volume) > 1e-9 * cell_volume)
    throw FileFormat(
        "stored cell volume disagrees with the rebuilt lattice; the atom was "
        "written with different construction options");
  (void)n;
  return atom;
}

}  // namespace

void save_atom(const Atom& atom, const std::filesystem::path& path,
               AtomFileFormat format) {
  const int n = atom.dim();
  if (format == AtomFileFormat::Binary) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw FileFormat("cannot open " + path.string() + " for writing");
    os.write(kMagic, sizeof(kMagic));
    write_raw(os, kVersion);
    write_raw(os, static_cast<std::uint32_t>(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) write_raw(os, atom.dilation().entries()(i, j));
    write_raw(os, static_cast<std::int32_t>(atom.scale()));
    for (int i = 0; i < n; ++i) write_raw(os, atom.center()[i]);
    write_raw(os, atom.triplet().p);
    write_raw(os, encode_q(atom.triplet().q));
    write_raw(os, static_cast<std::int32_t>(atom.triplet().s));
    for (int i = 0; i < n; ++i)
      write_raw(os, static_cast<std::uint32_t>(atom.grid_res()));
    write_raw(os, atom.cell_volume());
    write_raw(os, atom.seed());
    write_raw(os, static_cast<std::uint64_t>(atom.samples().size()));
    os.write(reinterpret_cast<const char*>(atom.samples().data()),
             static_cast<std::streamsize>(atom.samples().size() * sizeof(double)));
    if (!os) throw FileFormat("write failed for " + path.string());
    return;
  }

  std::ofstream os(path);
  if (!os) throw FileFormat("cannot open " + path.string() + " for writing");
  os.precision(17);
  os << "anisoatom 1\n";
  os << "n " << n << "\n";
  os << "matrix";
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) os << ' ' << atom.dilation().entries()(i, j);
  os << "\nk " << atom.scale() << "\n";
  os << "x0";
  for (int i = 0; i < n; ++i) os << ' ' << atom.center()[i];
  os << "\np " << atom.triplet().p << "\n";
  if (atom.triplet().q_is_inf())
    os << "q inf\n";
  else
    os << "q " << atom.triplet().q << "\n";
  os << "s " << atom.triplet().s << "\n";
  os << "grid";
  for (int i = 0; i < n; ++i) os << ' ' << atom.grid_res();
  os << "\ncell_volume " << atom.cell_volume() << "\n";
  os << "seed " << atom.seed() << "\n";
  os << "samples " << atom.samples().size() << "\n";
  for (double v : atom.samples()) os << v << "\n";
  if (!os) throw FileFormat("write failed for " + path.string());
}

Atom load_atom(const std::filesystem::path& path,
               const DilationOptions& dilation_opts,
               const QuasiNormOptions& quasinorm_opts) {
  std::ifstream probe(path, std::ios::binary);
  if (!probe) throw FileFormat("cannot open " + path.string());
  char head[8] = {};
  probe.read(head, sizeof(head));

  if (probe && std::memcmp(head, kMagic, sizeof(kMagic)) == 0) {
    std::ifstream is(path, std::ios::binary);
    is.seekg(sizeof(kMagic));
    const auto version = read_raw<std::uint32_t>(is);
    if (version != kVersion) throw FileFormat("unsupported atom file version");
    const int n = static_cast<int>(read_raw<std::uint32_t>(is));
    if (n < 1 || n > 16) throw FileFormat("implausible dimension in atom file");
    Eigen::MatrixXd matrix(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) matrix(i, j) = read_raw<double>(is);
    const int scale = read_raw<std::int32_t>(is);
    Eigen::VectorXd center(n);
    for (int i = 0; i < n; ++i) center[i] = read_raw<double>(is);
    const double p = read_raw<double>(is);
    const double q = decode_q(read_raw<double>(is));
    const int s = read_raw<std::int32_t>(is);
    int grid_res = 0;
    for (int i = 0; i < n; ++i) {
      const int g = static_cast<int>(read_raw<std::uint32_t>(is));
      if (i == 0)
        grid_res = g;
      else if (g != grid_res)
        throw FileFormat("anisotropic grid shapes are not supported");
    }
    const double cell_volume = read_raw<double>(is);
    const auto seed = read_raw<std::uint64_t>(is);
    const auto count = read_raw<std::uint64_t>(is);
    if (count > (1ull << 28)) throw FileFormat("implausible sample count");
    std::vector<double> samples(count);
    is.read(reinterpret_cast<char*>(samples.data()),
            static_cast<std::streamsize>(count * sizeof(double)));
    if (!is) throw FileFormat("unexpected end of atom file");
    return rebuild(n, matrix, scale, center, p, q, s, grid_res, cell_volume,
                   seed, std::move(samples), dilation_opts, quasinorm_opts);
  }

  // Text variant.
  std::ifstream is(path);
  std::string word;
  is >> word;
  if (word != "anisoatom") throw FileFormat("not an atom file: " + path.string());
  int version = 0;
  is >> version;
  if (version != 1) throw FileFormat("unsupported atom file version");
  auto expect = [&](const char* key) {
    is >> word;
    if (!is || word != key)
      throw FileFormat(std::string("expected key '") + key + "' in atom file");
  };
  expect("n");
  int n = 0;
  is >> n;
  if (n < 1 || n > 16) throw FileFormat("implausible dimension in atom file");
  expect("matrix");
  Eigen::MatrixXd matrix(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) is >> matrix(i, j);
  expect("k");
  int scale = 0;
  is >> scale;
  expect("x0");
  Eigen::VectorXd center(n);
  for (int i = 0; i < n; ++i) is >> center[i];
  expect("p");
  double p = 0;
  is >> p;
  expect("q");
  is >> word;
  const double q = word == "inf" ? std::numeric_limits<double>::infinity()
                                 : std::stod(word);
  expect("s");
  int s = 0;
  is >> s;
  expect("grid");
  int grid_res = 0;
  for (int i = 0; i < n; ++i) {
    int g = 0;
    is >> g;
    if (i == 0)
      grid_res = g;
    else if (g != grid_res)
      throw FileFormat("anisotropic grid shapes are not supported");
  }
  expect("cell_volume");
  double cell_volume = 0;
  is >> cell_volume;
  expect("seed");
  std::uint64_t seed = 0;
  is >> seed;
  expect("samples");
  std::uint64_t count = 0;
  is >> count;
  if (!is || count > (1ull << 28)) throw FileFormat("implausible sample count");
  std::vector<double> samples(count);
  for (auto& v : samples) is >> v;
  if (!is) throw FileFormat("unexpected end of atom file");
  return rebuild(n, matrix, scale, center, p, q, s, grid_res, cell_volume, seed,
                 std::move(samples), dilation_opts, quasinorm_opts);
}

}  // namespace aniso

#include "axilab/field_io.hpp"

#include <cstring>
#include <fstream>
#include <vector>

namespace axilab {
namespace {

constexpr char kMagic[4] = {'A', 'X', 'N', 'S'};

void put_u32(std::ostream& os, std::uint32_t v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

void put_f64(std::ostream& os, double v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::uint32_t get_u32(std::istream& is) {
    std::uint32_t v = 0;
    is.read(reinterpret_cast<char*>(&v), sizeof v);
    return v;
}

double get_f64(std::istream& is) {
    double v = 0;
    is.read(reinterpret_cast<char*>(&v), sizeof v);
    return v;
}

void write_header(std::ostream& os, const Grid& g, std::uint32_t ncomp) {
    os.write(kMagic, 4);
    put_u32(os, kSnapshotVersion);
    put_u32(os, ncomp);
    put_f64(os, static_cast<double>(g.nr));
    put_f64(os, static_cast<double>(g.nz));
    put_f64(os, g.r_max);
    put_f64(os, g.z_len);
}

void write_component(std::ostream& os, const ScalarField& f) {
    const Grid& g = f.grid();
    for (int i = 0; i < g.nr; ++i)
        for (int j = 0; j < g.nz; ++j)
            put_f64(os, f.at(i, j));
}

struct Header {
    Grid grid;
    std::uint32_t ncomp = 0;
    std::vector<Parity> parities;
};

Header read_header(std::istream& is, const std::string& path, int ghost_layers) {
    char magic[4] = {};
    is.read(magic, 4);
    if (!is || std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error("snapshot " + path + ": bad magic, not an AXNS file");
    const std::uint32_t version = get_u32(is);
    if (version != kSnapshotVersion)
        throw std::runtime_error("snapshot " + path + ": unsupported version " + std::to_string(version));
    Header h;
    h.ncomp = get_u32(is);
    const double nr = get_f64(is);
    const double nz = get_f64(is);
    const double r_max = get_f64(is);
    const double z_len = get_f64(is);
    h.grid = make_grid(static_cast<int>(nr), static_cast<int>(nz), r_max, z_len, ghost_layers);
    for (std::uint32_t c = 0; c < h.ncomp; ++c) {
        char b = 0;
        is.read(&b, 1);
        h.parities.push_back(b ? Parity::odd : Parity::even);
    }
    if (!is) throw std::runtime_error("snapshot " + path + ": truncated header");
    return h;
}

ScalarField read_component(std::istream& is, const Grid& g, Parity parity, const std::string& path) {
    ScalarField f(g, parity);
    for (int i = 0; i < g.nr; ++i)
        for (int j = 0; j < g.nz; ++j)
            f.at(i, j) = get_f64(is);
    if (!is) throw std::runtime_error("snapshot " + path + ": truncated payload");
    f.fill_axis_ghosts();
    return f;
}

} // namespace

void write_scalar_snapshot(const std::string& path, const ScalarField& field) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    write_header(os, field.grid(), 1);
    const char parity = field.parity() == Parity::odd ? 1 : 0;
    os.write(&parity, 1);
    write_component(os, field);
    if (!os) throw std::runtime_error("write failed for " + path);
}

void write_vector_snapshot(const std::string& path, const VectorFieldCyl& field) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    write_header(os, field.grid(), 3);
    const char parities[3] = {1, 1, 0};
    os.write(parities, 3);
    write_component(os, field.vr);
    write_component(os, field.vtheta);
    write_component(os, field.vz);
    if (!os) throw std::runtime_error("write failed for " + path);
}

ScalarField read_scalar_snapshot(const std::string& path, int ghost_layers) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path);
    Header h = read_header(is, path, ghost_layers);
    if (h.ncomp != 1)
        throw std::runtime_error("snapshot " + path + ": expected 1 component, found " + std::to_string(h.ncomp));
    return read_component(is, h.grid, h.parities[0], path);
}

VectorFieldCyl read_vector_snapshot(const std::string& path, int ghost_layers) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path);
    Header h = read_header(is, path, ghost_layers);
    if (h.ncomp != 3)
        throw std::runtime_error("snapshot " + path + ": expected 3 components, found " + std::to_string(h.ncomp));
    VectorFieldCyl v(h.grid);
    v.vr = read_component(is, h.grid, h.parities[0], path);
    v.vtheta = read_component(is, h.grid, h.parities[1], path);
    v.vz = read_component(is, h.grid, h.parities[2], path);
    return v;
}

void write_scalar_csv(const std::string& path, const ScalarField& field) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    os << "r,z,value\n";
    const Grid& g = field.grid();
    os.precision(17);
    for (int i = 0; i < g.nr; ++i)
        for (int j = 0; j < g.nz; ++j)
            os << g.radius(i) << ',' << g.axial(j) << ',' << field.at(i, j) << '\n';
    if (!os) throw std::runtime_error("write failed for " + path);
}

} // namespace axilab

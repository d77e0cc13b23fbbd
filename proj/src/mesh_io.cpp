#include "specgeo/errors.hpp"
#include "specgeo/manifold.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

namespace specgeo {

namespace {

std::string strip_comment(const std::string& line)
{
    const auto hash = line.find('#');
    return hash == std::string::npos ? line : line.substr(0, hash);
}

bool is_blank(const std::string& s)
{
    return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

std::string stem_label(const std::filesystem::path& path) { return path.stem().string(); }

DiscreteManifold read_off(std::istream& in, const std::string& label)
{
    std::string line;
    int line_no = 0;
    auto next_content = [&](std::string& out) {
        while (std::getline(in, line)) {
            ++line_no;
            out = strip_comment(line);
            if (!is_blank(out)) return true;
        }
        return false;
    };

    std::string content;
    if (!next_content(content)) throw MeshError("parse failure: empty OFF file", 0);
    std::istringstream header(content);
    std::string magic;
    header >> magic;
    if (magic.rfind("OFF", 0) != 0) throw MeshError("parse failure: missing OFF header", line_no);
    long nv = -1, nf = -1, ne = 0;
    if (!(header >> nv)) {
        if (!next_content(content)) throw MeshError("parse failure: missing OFF counts", line_no);
        std::istringstream counts(content);
        if (!(counts >> nv >> nf)) throw MeshError("parse failure: bad OFF counts", line_no);
        counts >> ne;
    } else if (!(header >> nf)) {
        throw MeshError("parse failure: bad OFF counts", line_no);
    }
    if (nv <= 0 || nf <= 0) throw MeshError("parse failure: OFF counts must be positive", line_no);

    std::vector<Eigen::Vector3d> positions(nv);
    for (long i = 0; i < nv; ++i) {
        if (!next_content(content)) throw MeshError("parse failure: truncated vertex list", line_no);
        std::istringstream row(content);
        double x, y, z;
        if (!(row >> x >> y >> z)) throw MeshError("parse failure: bad vertex record on line " + std::to_string(line_no), i);
        positions[i] = {x, y, z};
    }
    std::vector<Face> faces(nf);
    for (long f = 0; f < nf; ++f) {
        if (!next_content(content)) throw MeshError("parse failure: truncated face list", line_no);
        std::istringstream row(content);
        int k;
        if (!(row >> k)) throw MeshError("parse failure: bad face record on line " + std::to_string(line_no), f);
        if (k != 3) throw MeshError("non-triangular face", f);
        if (!(row >> faces[f][0] >> faces[f][1] >> faces[f][2])) {
            throw MeshError("parse failure: bad face record on line " + std::to_string(line_no), f);
        }
    }
    return DiscreteManifold::from_positions(std::move(positions), std::move(faces), label);
}

DiscreteManifold read_obj(std::istream& in, const std::string& label, std::vector<std::string>* warnings)
{
    std::vector<Eigen::Vector3d> positions;
    std::vector<Face> faces;
    std::set<std::string> ignored;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string content = strip_comment(line);
        if (is_blank(content)) continue;
        std::istringstream row(content);
        std::string tag;
        row >> tag;
        if (tag == "v") {
            double x, y, z;
            if (!(row >> x >> y >> z)) throw MeshError("parse failure: bad vertex record on line " + std::to_string(line_no), static_cast<long>(positions.size()));
            positions.push_back({x, y, z});
        } else if (tag == "f") {
            std::vector<int> idx;
            std::string token;
            while (row >> token) {
                const auto slash = token.find('/');
                const std::string head = token.substr(0, slash);
                int value = 0;
                try {
                    size_t used = 0;
                    value = std::stoi(head, &used);
                    if (used != head.size()) throw std::invalid_argument(head);
                } catch (const std::exception&) {
                    throw MeshError("parse failure: bad face index on line " + std::to_string(line_no), static_cast<long>(faces.size()));
                }
                if (value < 0) value = static_cast<int>(positions.size()) + value + 1;
                idx.push_back(value - 1);
            }
            if (idx.size() != 3) throw MeshError("non-triangular face", static_cast<long>(faces.size()));
            faces.push_back({idx[0], idx[1], idx[2]});
        } else {
            ignored.insert(tag);
        }
    }
    if (warnings) {
        for (const auto& tag : ignored) warnings->push_back("ignored OBJ record type '" + tag + "'");
    }
    return DiscreteManifold::from_positions(std::move(positions), std::move(faces), label);
}

} // namespace

DiscreteManifold load_mesh(const std::filesystem::path& path, MeshFormat format, std::vector<std::string>* warnings)
{
    std::ifstream in(path);
    if (!in) throw MeshError("cannot open mesh file " + path.string(), -1);
    if (format == MeshFormat::off) return read_off(in, stem_label(path));
    return read_obj(in, stem_label(path), warnings);
}

DiscreteManifold load_mesh(const std::filesystem::path& path, std::vector<std::string>* warnings)
{
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext == ".off") return load_mesh(path, MeshFormat::off, warnings);
    if (ext == ".obj") return load_mesh(path, MeshFormat::obj, warnings);
    throw MeshError("unsupported mesh extension '" + ext + "'", -1);
}

void save_off(const DiscreteManifold& mesh, const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out << "OFF\n" << mesh.vertex_count() << ' ' << mesh.face_count() << ' ' << mesh.edge_count() << '\n';
    out << std::setprecision(17);
    for (const auto& p : mesh.positions()) out << p.x() << ' ' << p.y() << ' ' << p.z() << '\n';
    for (const auto& f : mesh.faces()) out << "3 " << f[0] << ' ' << f[1] << ' ' << f[2] << '\n';
}

} // namespace specgeo

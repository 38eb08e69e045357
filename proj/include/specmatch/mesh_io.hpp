#pragma once

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "specmatch/mesh.hpp"

namespace specmatch {

enum class MeshFormat { Auto, Off, Obj, Ply };

namespace detail {

inline std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

inline MeshFormat format_from_extension(const std::string& path) {
  const std::string ext = lowercase(std::filesystem::path(path).extension().string());
  if (ext == ".off") return MeshFormat::Off;
  if (ext == ".obj") return MeshFormat::Obj;
  if (ext == ".ply") return MeshFormat::Ply;
  throw ParseError("cannot infer mesh format from extension of '" + path + "'");
}

// Strips comments and returns the next non-empty line, or false at EOF.
inline bool next_content_line(std::istream& in, std::string& line, char comment) {
  while (std::getline(in, line)) {
    const auto hash = line.find(comment);
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r\n") != std::string::npos) return true;
  }
  return false;
}

inline TriangleMesh read_off(std::istream& in, const std::string& name) {
  std::string line;
  if (!next_content_line(in, line, '#')) throw ParseError(name + ": empty OFF file");
  std::istringstream header(line);
  std::string magic;
  header >> magic;
  long nv = -1, nf = -1, ne = 0;
  if (magic == "OFF") {
    // counts may share the header line or follow on the next one
    if (!(header >> nv >> nf >> ne)) {
      if (!next_content_line(in, line, '#')) throw ParseError(name + ": OFF missing counts");
      std::istringstream counts(line);
      if (!(counts >> nv >> nf >> ne)) throw ParseError(name + ": bad OFF count line");
    }
  } else {
    // headerless variant: the first line is already the count line
    std::istringstream counts(line);
    if (!(counts >> nv >> nf >> ne)) throw ParseError(name + ": OFF header not recognized");
  }
  if (nv < 0 || nf < 0) throw ParseError(name + ": negative OFF counts");

  TriangleMesh mesh;
  mesh.name = name;
  mesh.vertices.resize(nv, 3);
  for (long i = 0; i < nv; ++i) {
    if (!next_content_line(in, line, '#')) throw ParseError(name + ": truncated OFF vertex list");
    std::istringstream v(line);
    if (!(v >> mesh.vertices(i, 0) >> mesh.vertices(i, 1) >> mesh.vertices(i, 2)))
      throw ParseError(name + ": bad OFF vertex on line '" + line + "'");
  }
  mesh.faces.resize(nf, 3);
  for (long f = 0; f < nf; ++f) {
    if (!next_content_line(in, line, '#')) throw ParseError(name + ": truncated OFF face list");
    std::istringstream fs(line);
    long arity = 0;
    if (!(fs >> arity)) throw ParseError(name + ": bad OFF face on line '" + line + "'");
    if (arity != 3) throw ParseError(name + ": only triangle faces are supported, got arity " +
                                     std::to_string(arity));
    if (!(fs >> mesh.faces(f, 0) >> mesh.faces(f, 1) >> mesh.faces(f, 2)))
      throw ParseError(name + ": bad OFF face on line '" + line + "'");
  }
  return mesh;
}

inline TriangleMesh read_obj(std::istream& in, const std::string& name) {
  std::vector<Eigen::RowVector3d> verts;
  std::vector<Eigen::RowVector3i> faces;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag == "v") {
      Eigen::RowVector3d p;
      if (!(ls >> p[0] >> p[1] >> p[2])) throw ParseError(name + ": bad OBJ vertex '" + line + "'");
      verts.push_back(p);
    } else if (tag == "f") {
      std::vector<long> idx;
      std::string tok;
      while (ls >> tok) {
        // take the vertex index before any '/vt/vn' suffix
        const auto slash = tok.find('/');
        if (slash != std::string::npos) tok.erase(slash);
        try {
          idx.push_back(std::stol(tok));
        } catch (const std::exception&) {
          throw ParseError(name + ": bad OBJ face token '" + tok + "'");
        }
      }
      if (idx.size() != 3)
        throw ParseError(name + ": only triangle faces are supported, got " +
                         std::to_string(idx.size()) + " corners");
      Eigen::RowVector3i f;
      for (int c = 0; c < 3; ++c) {
        long v = idx[c];
        if (v < 0) v = static_cast<long>(verts.size()) + v + 1;  // relative OBJ indices
        f[c] = static_cast<int>(v - 1);                          // OBJ is 1-based
      }
      faces.push_back(f);
    }
    // all other record types are ignored
  }
  TriangleMesh mesh;
  mesh.name = name;
  mesh.vertices.resize(static_cast<long>(verts.size()), 3);
  for (size_t i = 0; i < verts.size(); ++i) mesh.vertices.row(static_cast<long>(i)) = verts[i];
  mesh.faces.resize(static_cast<long>(faces.size()), 3);
  for (size_t f = 0; f < faces.size(); ++f) mesh.faces.row(static_cast<long>(f)) = faces[f];
  return mesh;
}

inline TriangleMesh read_ply(std::istream& in, const std::string& name) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("ply", 0) != 0)
    throw ParseError(name + ": missing 'ply' magic");
  long nv = -1, nf = -1;
  int x_col = -1, y_col = -1, z_col = -1;
  int vertex_props = 0;
  bool ascii = false;
  std::string current_element;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "format") {
      std::string fmt;
      ls >> fmt;
      ascii = (fmt == "ascii");
    } else if (tag == "element") {
      std::string el;
      long count = 0;
      ls >> el >> count;
      current_element = el;
      if (el == "vertex") nv = count;
      if (el == "face") nf = count;
    } else if (tag == "property" && current_element == "vertex") {
      std::string type, pname;
      ls >> type >> pname;
      if (type == "list") continue;
      if (pname == "x") x_col = vertex_props;
      if (pname == "y") y_col = vertex_props;
      if (pname == "z") z_col = vertex_props;
      ++vertex_props;
    } else if (tag == "end_header") {
      break;
    }
  }
  if (!ascii) throw ParseError(name + ": only ASCII PLY is supported");
  if (nv < 0 || nf < 0) throw ParseError(name + ": PLY header lacks vertex/face elements");
  if (x_col < 0 || y_col < 0 || z_col < 0)
    throw ParseError(name + ": PLY vertex element lacks x/y/z properties");

  TriangleMesh mesh;
  mesh.name = name;
  mesh.vertices.resize(nv, 3);
  std::vector<double> props(static_cast<size_t>(vertex_props));
  for (long i = 0; i < nv; ++i) {
    if (!next_content_line(in, line, '\0')) throw ParseError(name + ": truncated PLY vertices");
    std::istringstream vs(line);
    for (int p = 0; p < vertex_props; ++p)
      if (!(vs >> props[static_cast<size_t>(p)]))
        throw ParseError(name + ": bad PLY vertex '" + line + "'");
    mesh.vertices(i, 0) = props[static_cast<size_t>(x_col)];
    mesh.vertices(i, 1) = props[static_cast<size_t>(y_col)];
    mesh.vertices(i, 2) = props[static_cast<size_t>(z_col)];
  }
  mesh.faces.resize(nf, 3);
  for (long f = 0; f < nf; ++f) {
    if (!next_content_line(in, line, '\0')) throw ParseError(name + ": truncated PLY faces");
    std::istringstream fs(line);
    long arity = 0;
    if (!(fs >> arity) || arity != 3)
      throw ParseError(name + ": only triangle PLY faces are supported");
    if (!(fs >> mesh.faces(f, 0) >> mesh.faces(f, 1) >> mesh.faces(f, 2)))
      throw ParseError(name + ": bad PLY face '" + line + "'");
  }
  return mesh;
}

}  // namespace detail

/// Loads an ASCII OFF/OBJ/PLY mesh. The format is inferred from the file
/// extension unless given explicitly. The returned mesh satisfies the
/// TriangleMesh invariants; vertex order matches the file exactly.
inline TriangleMesh load_mesh(const std::string& path, MeshFormat format = MeshFormat::Auto) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open mesh file '" + path + "'");
  if (format == MeshFormat::Auto) format = detail::format_from_extension(path);
  const std::string name = std::filesystem::path(path).stem().string();
  TriangleMesh mesh;
  switch (format) {
    case MeshFormat::Off: mesh = detail::read_off(in, name); break;
    case MeshFormat::Obj: mesh = detail::read_obj(in, name); break;
    case MeshFormat::Ply: mesh = detail::read_ply(in, name); break;
    default: throw ParseError("unresolved mesh format for '" + path + "'");
  }
  validate_mesh(mesh);
  return mesh;
}

/// Writes the mesh as ASCII OFF with full double precision.
inline void save_mesh_off(const TriangleMesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open '" + path + "' for writing");
  out.precision(17);
  out << "OFF\n" << mesh.num_vertices() << ' ' << mesh.num_faces() << " 0\n";
  for (int i = 0; i < mesh.num_vertices(); ++i)
    out << mesh.vertices(i, 0) << ' ' << mesh.vertices(i, 1) << ' ' << mesh.vertices(i, 2) << '\n';
  for (int f = 0; f < mesh.num_faces(); ++f)
    out << "3 " << mesh.faces(f, 0) << ' ' << mesh.faces(f, 1) << ' ' << mesh.faces(f, 2) << '\n';
  if (!out) throw ParseError("failed writing '" + path + "'");
}

}  // namespace specmatch

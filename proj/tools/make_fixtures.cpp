// Regenerates the bundled meshes under data/.
#include "geomds/synthetic.hpp"

#include <filesystem>
#include <iostream>

int main(int argc, char** argv)
{
    const std::filesystem::path dir = argc > 1 ? argv[1] : "data";
    std::filesystem::create_directories(dir);
    geomds::save_off(geomds::synthetic::bumpy_torus(36, 50), dir / "bumpy_torus.off");
    geomds::save_off(geomds::synthetic::grid_mesh(40, 50, 0.025), dir / "flat_grid.off");
    std::cout << "wrote fixtures to " << dir << "\n";
    return 0;
}

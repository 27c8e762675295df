# -*- coding: utf-8 -*-
#
# tempo-team documentation build configuration file.
#
# Only the settings that differ from the sphinx-quickstart defaults are listed.

import contextlib
import os
import subprocess
import sys
import time

import tempo_team

# -- General configuration ------------------------------------------------

needs_sphinx = '1.5'

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.mathjax',
    'sphinx.ext.intersphinx',
    'sphinx.ext.viewcode',
]

intersphinx_mapping = {
    'python': ('https://docs.python.org/3', None),
    'numpy': ('https://numpy.org/doc/stable/', None),
    'click': ('https://click.palletsprojects.com/en/8.1.x/', None),
}

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'

project = 'tempo-team'
copyright_first_year = '2026'
copyright_owners = 'The tempo-team developers'
current_year = str(time.localtime().tm_year)
copyright_year_string = current_year if current_year == copyright_first_year else f'{copyright_first_year}-{current_year}'
copyright = f'{copyright_year_string}, {copyright_owners}. All rights reserved'  # pylint: disable=redefined-builtin

release = tempo_team.__version__
version = '.'.join(release.split('.')[:2])
language = 'en'
show_authors = True
pygments_style = 'sphinx'

# Names that appear in signatures and docstrings but have no target.
nitpick_ignore = [
    ('py:obj', 'module'),
    ('py:class', 'numpy.ndarray'),
    ('py:class', 'np.ndarray'),
    ('py:class', 'np.random.Generator'),
    ('py:class', 'ty.Any'),
    ('py:class', 'pathlib.Path'),
    ('py:exc', 'ValueError'),
    ('py:obj', 'str'),
    ('py:obj', 'int'),
    ('py:obj', 'float'),
    ('py:obj', 'bool'),
    ('py:obj', 'tuple'),
    ('py:obj', 'list'),
]

# -- Options for HTML output ----------------------------------------------

if os.environ.get('READTHEDOCS', None) != 'True':
    with contextlib.suppress(ImportError):
        import sphinx_rtd_theme
        html_theme = 'sphinx_rtd_theme'
        html_theme_path = [sphinx_rtd_theme.get_html_theme_path()]

html_theme_options = {
    'display_version': True,
}
html_show_sourcelink = False
html_search_language = 'en'
htmlhelp_basename = 'tempo-team-doc'


def run_apidoc(_):
    """Regenerate the API pages from the package on every build, so they exist on readthedocs too."""
    source_dir = os.path.abspath(os.path.dirname(__file__))
    apidoc_dir = os.path.join(source_dir, 'apidoc')
    package_dir = os.path.join(source_dir, os.pardir, os.pardir, 'tempo_team')

    cmd_path = 'sphinx-apidoc'
    if hasattr(sys, 'real_prefix'):  # virtualenv
        cmd_path = os.path.abspath(os.path.join(sys.prefix, 'bin', 'sphinx-apidoc'))

    env = os.environ.copy()
    env['SPHINX_APIDOC_OPTIONS'] = 'members,show-inheritance'
    subprocess.check_call([cmd_path, '-o', apidoc_dir, package_dir, '--force', '--no-toc'], env=env)


def setup(app):
    app.connect('builder-inited', run_apidoc)
